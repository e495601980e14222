#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "rment/core.hpp"
#include "rment/demo_io.hpp"
#include "rment/envs.hpp"
#include "rment/model_io.hpp"
#include "rment/robust.hpp"

using namespace rment;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("demo jsonl round trip") {
  std::vector<Demonstration> demos{gen_demo(EnvKind::kGridWorld, DemoKind::kCorrect, 0),
                                   gen_demo(EnvKind::kGridWorld, DemoKind::kRandom, 1),
                                   gen_demo(EnvKind::kMountainCar, DemoKind::kCorrect, 0),
                                   gen_demo(EnvKind::kMountainCar, DemoKind::kAdversarial, 2)};
  std::ostringstream out;
  write_demos_jsonl(out, demos);
  std::istringstream in(out.str());
  const std::vector<Demonstration> back = read_demos_jsonl(in);
  REQUIRE(back.size() == demos.size());
  for (std::size_t i = 0; i < demos.size(); ++i) CHECK(back[i] == demos[i]);

  // grid demos carry no raw states and serialize without the key
  std::istringstream lines(out.str());
  std::string first;
  std::getline(lines, first);
  CHECK(first.find("\"raw\"") == std::string::npos);
  CHECK(out.str().find("\"raw\"") != std::string::npos);  // mountain car does
}

TEST_CASE("demo jsonl writes one line per demo and skips blanks on read") {
  std::vector<Demonstration> demos{gen_demo(EnvKind::kGridWorld, DemoKind::kCorrect, 0),
                                   gen_demo(EnvKind::kGridWorld, DemoKind::kCorrect, 1)};
  std::ostringstream out;
  write_demos_jsonl(out, demos);
  int newlines = 0;
  for (char ch : out.str())
    if (ch == '\n') ++newlines;
  CHECK(newlines == 2);

  std::istringstream in("\n   \n" + out.str() + "\n\t\n");
  CHECK(read_demos_jsonl(in).size() == 2);
}

TEST_CASE("demo jsonl reports the failing line") {
  const std::string good =
      R"({"demo_id": "a", "steps": [{"s": 0, "a": 1}]})";
  {
    std::istringstream in(good + "\nnot json\n");
    try {
      read_demos_jsonl(in);
      FAIL("expected a parse error");
    } catch (const DemoParseError& e) {
      CHECK(e.line == 2);
    }
  }
  {
    // schema failure: steps missing
    std::istringstream in(std::string(R"({"demo_id": "b"})") + "\n" + good + "\n");
    try {
      read_demos_jsonl(in);
      FAIL("expected a parse error");
    } catch (const DemoParseError& e) {
      CHECK(e.line == 1);
    }
  }
}

TEST_CASE("demo file io") {
  const std::filesystem::path path = temp_file("rment_test_demos.jsonl");
  const std::vector<Demonstration> demos{gen_demo(EnvKind::kMountainCar, DemoKind::kRandom, 5)};
  write_demos_file(path.string(), demos);
  CHECK(read_demos_file(path.string()) == demos);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_demos_file(path.string()), std::runtime_error);
  CHECK_THROWS_AS(write_demos_file("/nonexistent-dir/x.jsonl", demos), std::runtime_error);
}

TEST_CASE("model json round trip is lossless") {
  const TaskSpec task = GridWorld::task_spec();
  const FeatureMap fm = FeatureMap::build(FeatureSpec::kTabularIndicator, task);
  const DemoSet ds =
      DemoSet::create(task, {gen_demo(EnvKind::kGridWorld, DemoKind::kCorrect, 0),
                             gen_demo(EnvKind::kGridWorld, DemoKind::kCorrect, 1),
                             gen_demo(EnvKind::kGridWorld, DemoKind::kAdversarial, 0)});
  OuterOptions opts;
  const RobustModel model = fit_robust(ds, fm, 1.0, opts);
  const ModelFile mf = make_model_file(model, task, FeatureSpec::kTabularIndicator,
                                       {"d0", "d1", "d2"}, opts);

  const std::string text = model_to_json(mf);
  const ModelFile back = model_from_json(text);
  CHECK(back.version == 1);
  CHECK(back.task == task);
  CHECK(back.feature_spec == FeatureSpec::kTabularIndicator);
  CHECK(back.n_features == fm.n_features);
  CHECK(back.lambda == mf.lambda);  // bit-exact doubles
  CHECK(back.weights == mf.weights);
  CHECK(back.m == mf.m);
  CHECK(back.demo_ids == mf.demo_ids);
  CHECK(back.c == mf.c);
  REQUIRE(back.history.size() == mf.history.size());
  for (std::size_t i = 0; i < mf.history.size(); ++i) {
    CHECK(back.history[i].objective == mf.history[i].objective);
    CHECK(back.history[i].w == mf.history[i].w);
  }
  CHECK(back.meta.inner_tol == mf.meta.inner_tol);
  CHECK(back.meta.inner_max_iter == mf.meta.inner_max_iter);
  CHECK(back.meta.outer_iterations == mf.meta.outer_iterations);
  CHECK(back.meta.converged == mf.meta.converged);
  CHECK(back.meta.oscillated == mf.meta.oscillated);
  CHECK(back.meta.inner_converged == mf.meta.inner_converged);
  CHECK(back.meta.boundary_hit == mf.meta.boundary_hit);
  CHECK(back.meta.grad_norm == mf.meta.grad_norm);
  CHECK(back.meta.dual_value == mf.meta.dual_value);
  CHECK(back.meta.objective == mf.meta.objective);

  // a second serialization of the reloaded model is byte-identical
  CHECK(model_to_json(back) == text);
}

TEST_CASE("mountain-car model keeps its discretizer") {
  const TaskSpec task = MountainCar::task_spec();
  ModelFile mf;
  mf.task = task;
  mf.feature_spec = FeatureSpec::kTiledIndicator;
  mf.n_features = task.n_states * task.n_actions;
  mf.lambda.assign(mf.n_features, 0.25);
  mf.weights = {1.0};
  mf.m = 1.0;
  mf.demo_ids = {"d"};
  mf.c = {-0.5};
  const ModelFile back = model_from_json(model_to_json(mf));
  CHECK(back.task.dims == task.dims);
  CHECK(back.feature_spec == FeatureSpec::kTiledIndicator);
}

TEST_CASE("model parsing rejects malformed input") {
  CHECK_THROWS_AS(model_from_json("{"), std::runtime_error);
  CHECK_THROWS_AS(model_from_json("{}"), std::runtime_error);

  const TaskSpec task = GridWorld::task_spec();
  ModelFile mf;
  mf.task = task;
  mf.n_features = task.n_states * task.n_actions;
  mf.lambda.assign(mf.n_features, 0.0);
  mf.weights = {1.0};
  mf.m = 1.0;
  mf.demo_ids = {"d"};
  mf.c = {-1.0};
  const std::string good = model_to_json(mf);
  CHECK_NOTHROW(model_from_json(good));

  std::string wrong_version = good;
  wrong_version.replace(wrong_version.find("\"version\": 1"), 12, "\"version\": 2");
  CHECK_THROWS_AS(model_from_json(wrong_version), std::runtime_error);

  ModelFile short_lambda = mf;
  short_lambda.lambda.pop_back();
  CHECK_THROWS_AS(model_from_json(model_to_json(short_lambda)), std::runtime_error);

  ModelFile mismatched = mf;
  mismatched.demo_ids.push_back("extra");
  CHECK_THROWS_AS(model_from_json(model_to_json(mismatched)), std::runtime_error);
}

TEST_CASE("model file io") {
  const std::filesystem::path path = temp_file("rment_test_model.json");
  const TaskSpec task = GridWorld::task_spec();
  ModelFile mf;
  mf.task = task;
  mf.n_features = task.n_states * task.n_actions;
  mf.lambda.assign(mf.n_features, -1.5);
  mf.weights = {0.5, 0.5};
  mf.m = 1.0;
  mf.demo_ids = {"a", "b"};
  mf.c = {-0.1, -0.1};
  save_model(path.string(), mf);
  const ModelFile back = load_model(path.string());
  CHECK(back.lambda == mf.lambda);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_model(path.string()), std::runtime_error);
  CHECK_THROWS_AS(save_model("/nonexistent-dir/m.json", mf), std::runtime_error);
}

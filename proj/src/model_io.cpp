#include "rment/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rment {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* feature_spec_name(FeatureSpec spec) {
  return spec == FeatureSpec::kTabularIndicator ? "tabular" : "tiled";
}

FeatureSpec feature_spec_from_name(const std::string& name) {
  if (name == "tabular") return FeatureSpec::kTabularIndicator;
  if (name == "tiled") return FeatureSpec::kTiledIndicator;
  throw std::runtime_error("unknown feature spec '" + name + "'");
}

}  // namespace

ModelFile make_model_file(const RobustModel& model, const TaskSpec& task, FeatureSpec spec,
                          const std::vector<std::string>& demo_ids, const OuterOptions& opts) {
  ModelFile mf;
  mf.task = task;
  mf.feature_spec = spec;
  mf.n_features = static_cast<int>(model.dual.lambda.size());
  mf.lambda = model.dual.lambda;
  mf.weights = model.weights.w;
  mf.m = model.weights.m;
  mf.demo_ids = demo_ids;
  mf.c = model.c;
  mf.history = model.history;
  mf.meta.inner_tol = opts.inner.tol;
  mf.meta.inner_max_iter = opts.inner.max_iter;
  mf.meta.outer_iterations = static_cast<int>(model.history.size());
  mf.meta.converged = model.converged;
  mf.meta.oscillated = model.oscillated;
  mf.meta.inner_converged = model.inner_converged;
  mf.meta.boundary_hit = model.dual.boundary_hit;
  mf.meta.grad_norm = model.dual.grad_norm;
  mf.meta.dual_value = model.dual.dual_value;
  mf.meta.objective = model.objective;
  return mf;
}

std::string model_to_json(const ModelFile& mf) {
  ordered_json j;
  j["version"] = mf.version;
  ordered_json task;
  task["name"] = mf.task.name;
  task["n_states"] = mf.task.n_states;
  task["n_actions"] = mf.task.n_actions;
  auto& dims = task["dims"] = ordered_json::array();
  for (const DiscretizerDim& d : mf.task.dims)
    dims.push_back({{"lo", d.lo}, {"hi", d.hi}, {"bins", d.bins}});
  j["task"] = std::move(task);
  j["feature_spec"] = feature_spec_name(mf.feature_spec);
  j["n_features"] = mf.n_features;
  j["lambda"] = mf.lambda;
  j["weights"] = mf.weights;
  j["m"] = mf.m;
  j["demo_ids"] = mf.demo_ids;
  j["c"] = mf.c;
  auto& hist = j["history"] = ordered_json::array();
  for (const OuterIterate& it : mf.history)
    hist.push_back({{"objective", it.objective}, {"w", it.w}});
  ordered_json meta;
  meta["inner_tol"] = mf.meta.inner_tol;
  meta["inner_max_iter"] = mf.meta.inner_max_iter;
  meta["outer_iterations"] = mf.meta.outer_iterations;
  meta["converged"] = mf.meta.converged;
  meta["oscillated"] = mf.meta.oscillated;
  meta["inner_converged"] = mf.meta.inner_converged;
  meta["boundary_hit"] = mf.meta.boundary_hit;
  meta["grad_norm"] = mf.meta.grad_norm;
  meta["dual_value"] = mf.meta.dual_value;
  meta["objective"] = mf.meta.objective;
  j["meta"] = std::move(meta);
  return j.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model parse error: ") + e.what());
  }
  ModelFile mf;
  try {
    mf.version = j.at("version").get<int>();
    if (mf.version != 1) throw std::runtime_error("unsupported model version");
    const auto& task = j.at("task");
    mf.task.name = task.at("name").get<std::string>();
    mf.task.n_states = task.at("n_states").get<int>();
    mf.task.n_actions = task.at("n_actions").get<int>();
    for (const auto& d : task.at("dims"))
      mf.task.dims.push_back(
          {d.at("lo").get<double>(), d.at("hi").get<double>(), d.at("bins").get<int>()});
    mf.feature_spec = feature_spec_from_name(j.at("feature_spec").get<std::string>());
    mf.n_features = j.at("n_features").get<int>();
    mf.lambda = j.at("lambda").get<std::vector<double>>();
    mf.weights = j.at("weights").get<std::vector<double>>();
    mf.m = j.at("m").get<double>();
    mf.demo_ids = j.at("demo_ids").get<std::vector<std::string>>();
    mf.c = j.at("c").get<std::vector<double>>();
    for (const auto& it : j.at("history")) {
      OuterIterate oi;
      oi.objective = it.at("objective").get<double>();
      oi.w = it.at("w").get<std::vector<double>>();
      mf.history.push_back(std::move(oi));
    }
    const auto& meta = j.at("meta");
    mf.meta.inner_tol = meta.at("inner_tol").get<double>();
    mf.meta.inner_max_iter = meta.at("inner_max_iter").get<int>();
    mf.meta.outer_iterations = meta.at("outer_iterations").get<int>();
    mf.meta.converged = meta.at("converged").get<bool>();
    mf.meta.oscillated = meta.at("oscillated").get<bool>();
    mf.meta.inner_converged = meta.at("inner_converged").get<bool>();
    mf.meta.boundary_hit = meta.at("boundary_hit").get<bool>();
    mf.meta.grad_norm = meta.at("grad_norm").get<double>();
    mf.meta.dual_value = meta.at("dual_value").get<double>();
    mf.meta.objective = meta.at("objective").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model parse error: ") + e.what());
  }
  mf.task.validate();
  if (static_cast<int>(mf.lambda.size()) != mf.n_features)
    throw std::runtime_error("model lambda length does not match n_features");
  if (mf.weights.size() != mf.demo_ids.size() || mf.weights.size() != mf.c.size())
    throw std::runtime_error("model weight, demo_id, and c lengths disagree");
  return mf;
}

void save_model(const std::string& path, const ModelFile& mf) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << model_to_json(mf);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace rment

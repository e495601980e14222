#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "rment/core.hpp"
#include "rment/envs.hpp"
#include "rment/eval.hpp"
#include "rment/rng.hpp"

using namespace rment;

namespace {

TaskSpec tiny_task(int s, int a) {
  TaskSpec t;
  t.name = "tiny";
  t.n_states = s;
  t.n_actions = a;
  return t;
}

Demonstration make_demo(const std::string& id, std::vector<Step> steps) {
  Demonstration d;
  d.demo_id = id;
  d.steps = std::move(steps);
  return d;
}

}  // namespace

TEST_CASE("pooled counts drive the cloning fit") {
  const TaskSpec t = tiny_task(3, 2);
  const DemoSet ds = DemoSet::create(
      t, {make_demo("a", {{0, 0}}), make_demo("b", {{0, 1}})});
  const Policy pi = bc_mle_fit(ds);
  CHECK(pi.table(0, 0) == 0.5);
  CHECK(pi.table(0, 1) == 0.5);
  // unvisited states fall back to uniform
  CHECK(pi.table(1, 0) == 0.5);
  CHECK(pi.table(2, 1) == 0.5);
}

TEST_CASE("cloning fit matches a direct recount") {
  const TaskSpec t = tiny_task(4, 3);
  RngStream rng(12);
  std::vector<Demonstration> demos;
  for (int d = 0; d < 3; ++d) {
    Demonstration demo;
    demo.demo_id = "d" + std::to_string(d);
    for (int i = 0; i < 20; ++i)
      demo.steps.push_back({rng.uniform_int(4), rng.uniform_int(3)});
    demos.push_back(std::move(demo));
  }
  const Policy pi = bc_mle_fit(DemoSet::create(t, demos));
  std::vector<int> joint(12, 0), per_state(4, 0);
  for (const Demonstration& d : demos)
    for (const Step& st : d.steps) {
      joint[st.s * 3 + st.a] += 1;
      per_state[st.s] += 1;
    }
  for (int s = 0; s < 4; ++s) {
    double row = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double want = per_state[s] == 0
                              ? 1.0 / 3
                              : static_cast<double>(joint[s * 3 + a]) / per_state[s];
      CHECK(pi.table(s, a) == doctest::Approx(want).epsilon(1e-15));
      row += pi.table(s, a);
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("a flipped demo dilutes the pooled conditional") {
  const TaskSpec task = GridWorld::task_spec();
  const Demonstration good = gen_demo(EnvKind::kGridWorld, DemoKind::kCorrect, 0);
  const Demonstration bad = gen_demo(EnvKind::kGridWorld, DemoKind::kAdversarial, 0);
  const Policy clean = bc_mle_fit(DemoSet::create(task, {good}));
  CHECK(clean.table(0, GridWorld::kUp) == 1.0);
  const Policy mixed = bc_mle_fit(DemoSet::create(task, {good, bad}));
  // the adversarial demo parks at the start state and votes down/left there
  CHECK(mixed.table(0, GridWorld::kUp) == doctest::Approx(1.0 / 9).epsilon(1e-12));
  CHECK(mixed.table(0, GridWorld::kDown) == doctest::Approx(4.0 / 9).epsilon(1e-12));
  CHECK(mixed.table(0, GridWorld::kLeft) == doctest::Approx(4.0 / 9).epsilon(1e-12));
}

TEST_CASE("grid accuracy against direct enumeration") {
  RngStream rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    Policy pi;
    pi.table = Matrix(GridWorld::kNStates, GridWorld::kNActions);
    for (int s = 0; s < GridWorld::kNStates; ++s)
      for (int a = 0; a < GridWorld::kNActions; ++a) pi.table(s, a) = rng.uniform01();
    int good = 0;
    for (int s = 0; s < GridWorld::kNStates; ++s) {
      if (s == GridWorld::kGoal) continue;
      const auto opt = GridWorld::optimal_actions(s);
      if (std::find(opt.begin(), opt.end(), pi.argmax(s)) != opt.end()) ++good;
    }
    CHECK(grid_accuracy(pi) == doctest::Approx(good / 24.0).epsilon(1e-15));
  }
}

TEST_CASE("grid accuracy worked examples") {
  Policy uniform;
  uniform.table = Matrix(GridWorld::kNStates, GridWorld::kNActions, 0.25);
  // argmax ties resolve to Up, which is optimal everywhere below the top row
  CHECK(grid_accuracy(uniform) == doctest::Approx(20.0 / 24).epsilon(1e-15));

  Policy down;
  down.table = Matrix(GridWorld::kNStates, GridWorld::kNActions);
  for (int s = 0; s < GridWorld::kNStates; ++s) down.table(s, GridWorld::kDown) = 1.0;
  CHECK(grid_accuracy(down) == 0.0);

  Policy wrong_shape;
  wrong_shape.table = Matrix(3, 4, 0.25);
  CHECK_THROWS_AS(grid_accuracy(wrong_shape), std::invalid_argument);
}

TEST_CASE("accuracy only reads the argmax, not the scale") {
  RngStream rng(9);
  Policy pi;
  pi.table = Matrix(GridWorld::kNStates, GridWorld::kNActions);
  for (int s = 0; s < GridWorld::kNStates; ++s)
    for (int a = 0; a < GridWorld::kNActions; ++a) pi.table(s, a) = rng.uniform01();
  Policy scaled = pi;
  for (int s = 0; s < GridWorld::kNStates; ++s)
    for (int a = 0; a < GridWorld::kNActions; ++a) scaled.table(s, a) *= 7.5;
  CHECK(grid_accuracy(pi) == grid_accuracy(scaled));
}

TEST_CASE("expected return is reproducible and matches per-episode rollouts") {
  Policy pi;
  pi.table = Matrix(GridWorld::kNStates, GridWorld::kNActions, 0.25);
  const ReturnStats a = expected_return(pi, EnvKind::kGridWorld, 40, 5);
  const ReturnStats b = expected_return(pi, EnvKind::kGridWorld, 40, 5);
  CHECK(a.mean == b.mean);
  CHECK(a.stddev == b.stddev);

  double mean = 0.0;
  std::vector<double> rets;
  for (int e = 0; e < 40; ++e) {
    rets.push_back(rollout(pi, EnvKind::kGridWorld, 5 + e, GridWorld::kMaxEpisodeSteps).ret);
    mean += rets.back();
  }
  mean /= 40;
  double ss = 0.0;
  for (double r : rets) ss += (r - mean) * (r - mean);
  CHECK(a.mean == doctest::Approx(mean).epsilon(1e-15));
  CHECK(a.stddev == doctest::Approx(std::sqrt(ss / 40)).epsilon(1e-12));
  CHECK_THROWS_AS(expected_return(pi, EnvKind::kGridWorld, 0, 1), std::invalid_argument);
}

TEST_CASE("sweep emits one row per algorithm and count") {
  const std::vector<SweepRow> rows =
      robustness_sweep(EnvKind::kGridWorld, 2, 2, {"rment", "bc"}, 1.0, 0);
  REQUIRE(rows.size() == 6);
  for (int k = 0; k <= 2; ++k) {
    const SweepRow& rm = rows[2 * k];
    const SweepRow& bc = rows[2 * k + 1];
    CHECK(rm.alg == "rment");
    CHECK(bc.alg == "bc");
    CHECK(rm.n_adversarial == k);
    CHECK(bc.n_adversarial == k);
    CHECK(rm.task == "gridworld");
    CHECK(rm.metric == "accuracy");
    CHECK(rm.n_correct == 2);
    CHECK(rm.m == 1.0);
    CHECK(rm.seed == static_cast<std::uint64_t>(k));
    CHECK_FALSE(rm.error);
    CHECK_FALSE(bc.error);
    CHECK(rm.weights.size() == static_cast<std::size_t>(2 + k));
    CHECK(bc.weights.empty());
    CHECK(rm.converged);
    CHECK(rm.value == 1.0);  // adversarial demos carry no weight
  }
  // rerunning gives identical rows
  const std::vector<SweepRow> again =
      robustness_sweep(EnvKind::kGridWorld, 2, 2, {"rment", "bc"}, 1.0, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].value == again[i].value);
    CHECK(rows[i].weights == again[i].weights);
  }
  CHECK_THROWS_AS(robustness_sweep(EnvKind::kGridWorld, 0, 1, {"bc"}, 1.0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(robustness_sweep(EnvKind::kGridWorld, 2, 1, {"svm"}, 1.0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(robustness_sweep(EnvKind::kGridWorld, 2, 1, {}, 1.0, 0), std::invalid_argument);
}

TEST_CASE("sweep csv schema") {
  std::vector<SweepRow> rows =
      robustness_sweep(EnvKind::kGridWorld, 2, 1, {"rment", "bc"}, 1.0, 0);
  SweepRow broken;
  broken.alg = "rment";
  broken.task = "gridworld";
  broken.n_correct = 2;
  broken.n_adversarial = 9;
  broken.m = 1.0;
  broken.metric = "accuracy";
  broken.seed = 4;
  broken.error = true;
  broken.error_msg = "synthetic";
  rows.push_back(broken);

  std::ostringstream out;
  write_sweep_csv(out, rows);
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "alg,task,n_correct,n_adversarial,M,metric,value,seed");
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
  }
  CHECK(n == 5);
  CHECK(out.str().find("rment,gridworld,2,0,1,accuracy,1,0") != std::string::npos);
  CHECK(out.str().find("rment,gridworld,2,9,1,accuracy,error,4") != std::string::npos);

  std::ostringstream out2;
  write_sweep_csv(out2, rows);
  CHECK(out.str() == out2.str());
}

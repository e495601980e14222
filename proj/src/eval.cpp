#include "rment/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "rment/maxent.hpp"
#include "rment/robust.hpp"

namespace rment {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Policy bc_mle_fit(const DemoSet& demos) {
  const int S = demos.task.n_states;
  const int A = demos.task.n_actions;
  std::vector<long long> joint(static_cast<std::size_t>(S) * A, 0);
  std::vector<long long> per_state(S, 0);
  for (const Demonstration& d : demos.demos) {
    for (const Step& st : d.steps) {
      joint[static_cast<std::size_t>(st.s) * A + st.a] += 1;
      per_state[st.s] += 1;
    }
  }
  Policy pi;
  pi.table = Matrix(S, A);
  for (int s = 0; s < S; ++s) {
    if (per_state[s] == 0) {
      for (int a = 0; a < A; ++a) pi.table(s, a) = 1.0 / A;
    } else {
      for (int a = 0; a < A; ++a)
        pi.table(s, a) = static_cast<double>(joint[static_cast<std::size_t>(s) * A + a]) /
                         static_cast<double>(per_state[s]);
    }
  }
  return pi;
}

double grid_accuracy(const Policy& policy) {
  if (policy.n_states() != GridWorld::kNStates || policy.n_actions() != GridWorld::kNActions)
    throw std::invalid_argument("policy dimensions do not match the grid task");
  int good = 0;
  int total = 0;
  for (StateId s = 0; s < GridWorld::kNStates; ++s) {
    if (s == GridWorld::kGoal) continue;
    ++total;
    const ActionId pick = policy.argmax(s);
    const std::vector<ActionId> opt = GridWorld::optimal_actions(s);
    if (std::find(opt.begin(), opt.end(), pick) != opt.end()) ++good;
  }
  return static_cast<double>(good) / total;
}

ReturnStats expected_return(const Policy& policy, EnvKind env, int n_episodes,
                            std::uint64_t seed) {
  if (n_episodes < 1) throw std::invalid_argument("need at least one episode");
  std::vector<double> returns(n_episodes);
  const int cap = env_max_steps(env);
  for (int e = 0; e < n_episodes; ++e)
    returns[e] = rollout(policy, env, seed + static_cast<std::uint64_t>(e), cap).ret;
  ReturnStats rs;
  for (double r : returns) rs.mean += r;
  rs.mean /= n_episodes;
  double ss = 0.0;
  for (double r : returns) ss += (r - rs.mean) * (r - rs.mean);
  rs.stddev = std::sqrt(ss / n_episodes);
  return rs;
}

std::vector<SweepRow> robustness_sweep(EnvKind env, int n_correct, int n_adversarial,
                                       const std::vector<std::string>& algs, double m,
                                       std::uint64_t seed) {
  if (n_correct < 1) throw std::invalid_argument("need at least one correct demo");
  if (n_adversarial < 0) throw std::invalid_argument("adversarial count must be non-negative");
  if (algs.empty()) throw std::invalid_argument("no algorithms given");
  for (const std::string& alg : algs)
    if (alg != "rment" && alg != "bc")
      throw std::invalid_argument("unknown algorithm '" + alg + "'");

  const TaskSpec task = env_task_spec(env);
  std::vector<Demonstration> correct;
  correct.reserve(n_correct);
  for (int i = 0; i < n_correct; ++i)
    correct.push_back(gen_demo(env, DemoKind::kCorrect, seed + static_cast<std::uint64_t>(i)));

  std::vector<SweepRow> rows;
  for (int k = 0; k <= n_adversarial; ++k) {
    std::vector<Demonstration> demos = correct;
    for (int j = 0; j < k; ++j)
      demos.push_back(gen_demo(env, DemoKind::kAdversarial, seed + static_cast<std::uint64_t>(j)));
    const std::uint64_t row_seed = seed + static_cast<std::uint64_t>(k);
    for (const std::string& alg : algs) {
      SweepRow row;
      row.alg = alg;
      row.task = task.name;
      row.n_correct = n_correct;
      row.n_adversarial = k;
      row.m = m;
      row.seed = row_seed;
      row.metric = env == EnvKind::kGridWorld ? "accuracy" : "return_mean";
      try {
        DemoSet ds = DemoSet::create(task, demos);
        Policy pi;
        if (alg == "rment") {
          const FeatureMap fm = FeatureMap::build(
              task.dims.empty() ? FeatureSpec::kTabularIndicator : FeatureSpec::kTiledIndicator,
              task);
          const RobustModel model = fit_robust(ds, fm, m);
          row.weights = model.weights.w;
          row.converged = model.converged;
          pi = policy_from_lambda(model.dual.lambda, fm);
        } else {
          pi = bc_mle_fit(ds);
        }
        row.value = env == EnvKind::kGridWorld ? grid_accuracy(pi)
                                               : expected_return(pi, env, 100, row_seed).mean;
      } catch (const std::exception& e) {
        row.error = true;
        row.error_msg = e.what();
        row.value = std::numeric_limits<double>::quiet_NaN();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "alg,task,n_correct,n_adversarial,M,metric,value,seed\n";
  for (const SweepRow& r : rows) {
    out << r.alg << ',' << r.task << ',' << r.n_correct << ',' << r.n_adversarial << ','
        << fmt_double(r.m) << ',' << r.metric << ','
        << (r.error ? std::string("error") : fmt_double(r.value)) << ',' << r.seed << '\n';
  }
}

}  // namespace rment

#include "rment/empirical.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace rment {

void WeightVector::validate() const {
  if (!(m > 0.0)) throw std::invalid_argument("weight budget must be positive");
  double sum = 0.0;
  for (double wd : w) {
    if (!(wd >= -1e-9) || !(wd <= 1.0 + 1e-9))
      throw std::invalid_argument("demo weight outside [0, 1]");
    sum += wd;
  }
  if (std::abs(sum - m) > 1e-9)
    throw std::invalid_argument("demo weights do not sum to the budget");
}

DemoStats demo_stats(const Demonstration& demo, const TaskSpec& task, const FeatureMap& fm) {
  validate_demo(demo, task);
  const int S = task.n_states;
  const int A = task.n_actions;

  DemoStats st;
  st.demo_id = demo.demo_id;
  st.n_states = S;
  st.n_actions = A;
  st.n_steps = static_cast<int>(demo.steps.size());
  st.state_counts.assign(S, 0);
  st.joint_counts.assign(static_cast<std::size_t>(S) * A, 0);
  for (const Step& sp : demo.steps) {
    st.state_counts[sp.s] += 1;
    st.joint_counts[static_cast<std::size_t>(sp.s) * A + sp.a] += 1;
  }

  st.state_dist.assign(S, 0.0);
  st.joint.assign(static_cast<std::size_t>(S) * A, 0.0);
  st.visited.assign(S, 0);
  st.cond_policy = Matrix(S, A);
  const double q = static_cast<double>(st.n_steps);
  for (int s = 0; s < S; ++s) {
    const int ns = st.state_counts[s];
    if (ns == 0) continue;
    st.visited[s] = 1;
    st.state_dist[s] = ns / q;
    for (int a = 0; a < A; ++a) {
      const int nsa = st.joint_counts[static_cast<std::size_t>(s) * A + a];
      if (nsa == 0) continue;
      st.joint[static_cast<std::size_t>(s) * A + a] = nsa / q;
      st.cond_policy(s, a) = static_cast<double>(nsa) / ns;
    }
  }

  st.feat_expect.assign(fm.n_features, 0.0);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      const double p = st.joint[static_cast<std::size_t>(s) * A + a];
      if (p == 0.0) continue;
      fm.for_each_active(s, a, [&](int i, double v) { st.feat_expect[i] += p * v; });
    }
  }
  return st;
}

WeightedStats weighted_mixture(const std::vector<DemoStats>& stats, const WeightVector& w,
                               const FeatureMap& fm) {
  if (stats.size() != w.w.size())
    throw std::invalid_argument("weight vector length does not match demo count");
  w.validate();
  if (stats.empty()) throw std::invalid_argument("no demo statistics given");
  const int S = stats[0].n_states;
  const int A = stats[0].n_actions;
  for (const DemoStats& st : stats)
    if (st.n_states != S || st.n_actions != A)
      throw std::invalid_argument("demo statistics disagree on task dimensions");

  WeightedStats ws;
  ws.m = w.m;
  ws.w = w;
  ws.p_w.assign(S, 0.0);
  ws.joint_w.assign(static_cast<std::size_t>(S) * A, 0.0);
  for (std::size_t d = 0; d < stats.size(); ++d) {
    const double wd = w.w[d];
    if (wd == 0.0) continue;
    for (int s = 0; s < S; ++s) {
      if (stats[d].state_dist[s] == 0.0) continue;
      ws.p_w[s] += wd * stats[d].state_dist[s];
      for (int a = 0; a < A; ++a)
        ws.joint_w[static_cast<std::size_t>(s) * A + a] +=
            wd * stats[d].joint[static_cast<std::size_t>(s) * A + a];
    }
  }
  for (double& p : ws.p_w) p /= w.m;
  for (double& p : ws.joint_w) p /= w.m;

  ws.feat_expect.assign(fm.n_features, 0.0);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      const double p = ws.joint_w[static_cast<std::size_t>(s) * A + a];
      if (p == 0.0) continue;
      fm.for_each_active(s, a, [&](int i, double v) { ws.feat_expect[i] += p * v; });
    }
  }
  return ws;
}

std::vector<double> model_feature_expectation(const Policy& policy, const std::vector<double>& p_w,
                                              const FeatureMap& fm) {
  const int S = fm.n_states;
  const int A = fm.n_actions;
  if (policy.n_states() != S || policy.n_actions() != A)
    throw std::invalid_argument("policy dimensions do not match the feature map");
  if (static_cast<int>(p_w.size()) != S)
    throw std::invalid_argument("state distribution length does not match the feature map");

  std::vector<double> out(fm.n_features, 0.0);
  for (int s = 0; s < S; ++s) {
    if (p_w[s] == 0.0) continue;
    for (int a = 0; a < A; ++a) {
      const double pa = policy.table(s, a);
      if (pa == 0.0) continue;
      fm.for_each_active(s, a, [&](int i, double v) { out[i] += p_w[s] * pa * v; });
    }
  }
  return out;
}

}  // namespace rment

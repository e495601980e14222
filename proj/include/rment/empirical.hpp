#pragma once

#include <vector>

#include "rment/core.hpp"

namespace rment {

// Per-demonstration empirical statistics. Tallies are kept as integer counts
// and divided once at the end so results are bit-identical across platforms.
struct DemoStats {
  std::string demo_id;
  int n_states = 0;
  int n_actions = 0;
  int n_steps = 0;
  std::vector<int> state_counts;    // |S|
  std::vector<int> joint_counts;    // |S|*|A| row-major
  std::vector<double> state_dist;   // p(s | demo)
  std::vector<double> joint;        // p(s, a | demo)
  std::vector<char> visited;        // per state
  // Rows of visited states are stochastic; unvisited rows stay all-zero and
  // contribute nothing anywhere (every use multiplies by state_dist(s) = 0).
  Matrix cond_policy;
  std::vector<double> feat_expect;  // sum_{s,a} joint(s,a) * f(s,a)
};

// Trust weights, one per demo, each in [0,1], summing to the budget m.
struct WeightVector {
  std::vector<double> w;
  double m = 1.0;

  // Throws std::invalid_argument on box or sum violation (1e-9 slack).
  void validate() const;
};

// Weight-mixed empirical distributions: p_w(s) = (1/m) sum_d w_d p(s|d),
// joint_w likewise. feat_expect is cached from joint_w.
struct WeightedStats {
  std::vector<double> p_w;
  std::vector<double> joint_w;
  double m = 1.0;
  WeightVector w;
  std::vector<double> feat_expect;
};

DemoStats demo_stats(const Demonstration& demo, const TaskSpec& task, const FeatureMap& fm);

WeightedStats weighted_mixture(const std::vector<DemoStats>& stats, const WeightVector& w,
                               const FeatureMap& fm);

// sum_s p_w(s) sum_a pi(a|s) f(s,a)
std::vector<double> model_feature_expectation(const Policy& policy, const std::vector<double>& p_w,
                                              const FeatureMap& fm);

}  // namespace rment

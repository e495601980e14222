#pragma once

#include <span>
#include <vector>

#include "rment/core.hpp"
#include "rment/empirical.hpp"
#include "rment/maxent.hpp"

namespace rment {

// Per-demo pieces of the dual at a fixed lambda:
//   a_d = sum_s p(s|d) log z(s)
//   b_d = lambda . feat_expect_d
//   c_d = b_d - a_d   (the demo's expected log-likelihood under the policy)
struct PerDemoTerms {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
};

PerDemoTerms per_demo_terms(std::span<const double> lambda, const std::vector<DemoStats>& stats,
                            const FeatureMap& fm, std::span<const double> log_z);

// Minimizes -(1/m) sum_d w_d c_d over { 0 <= w <= 1, sum w = m }: weight 1.0
// in decreasing c order until the budget runs out; a group of c values tied
// within tie_rel_tol (relative, floored at absolute scale 1) that straddles
// the boundary splits the remaining budget uniformly.
WeightVector weight_step(std::span<const double> c, double m, double tie_rel_tol = 1e-7);

struct OuterOptions {
  int max_outer = 50;
  double w_tol = 1e-9;       // infinity-norm for weight convergence and cycle detection
  double tie_rel_tol = 1e-7;
  // Tighter than the standalone default: the weight step compares c_d values
  // whose noise floor is set by this tolerance.
  SolverOptions inner{.tol = 1e-9, .max_iter = 20000};
};

struct OuterIterate {
  double objective = 0.0;
  std::vector<double> w;
};

struct RobustModel {
  DualSolution dual;
  WeightVector weights;
  double objective = 0.0;           // -(1/m) sum_d w_d c_d at the returned iterate
  std::vector<double> c;            // per-demo terms at the returned iterate
  std::vector<OuterIterate> history;
  bool converged = false;
  bool oscillated = false;
  bool inner_converged = true;      // false if any inner fit hit its iteration limit
};

// Alternating minimization: fit lambda on the weighted mixture (warm started,
// unsupported coordinates reset to zero), then take an exact weight step on
// fresh c values. Stops when the weights repeat, cycle, or max_outer is hit;
// on non-convergence the best-objective iterate is returned.
RobustModel fit_robust(const DemoSet& demos, const FeatureMap& fm, double m,
                       const OuterOptions& opts = {});

}  // namespace rment

#pragma once

#include <span>
#include <vector>

#include "rment/core.hpp"
#include "rment/empirical.hpp"

namespace rment {

struct SolverOptions {
  double tol = 1e-6;  // gradient infinity-norm target
  int max_iter = 5000;
  double lambda_cap = 500.0;
  double armijo_c1 = 1e-4;
  double step_init = 1.0;
  double step_max = 1e8;
  double step_min = 1e-18;
};

struct DualSolution {
  std::vector<double> lambda;
  std::vector<double> log_z;  // per state, for the full state space
  double dual_value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;  // accepted ascent steps
  bool converged = false;
  bool boundary_hit = false;  // some lambda entry clamped at +-lambda_cap
  std::vector<double> value_trace;  // dual value at start plus after each accepted step
};

// log sum_a exp(lambda . f(s,a)), evaluated in shifted form.
double log_partition(std::span<const double> lambda, const FeatureMap& fm, StateId s);

// pi(a|s) = exp(lambda . f(s,a) - log_partition(s)). Rows are normalized by
// the shifted-exponential sum, so they total 1 up to rounding.
Policy policy_from_lambda(std::span<const double> lambda, const FeatureMap& fm);

// Dual objective: -sum_s p_w(s) log z(s) + lambda . feat_expect.
double dual_value(std::span<const double> lambda, const WeightedStats& ws, const FeatureMap& fm);

// Gradient = empirical feature expectation - model feature expectation.
std::vector<double> dual_gradient(std::span<const double> lambda, const WeightedStats& ws,
                                  const FeatureMap& fm);

// Projected ascent with L-BFGS directions under an Armijo acceptance test;
// plain gradient steps with a doubling/backtracking step size bootstrap the
// curvature memory and take over when a quasi-Newton step is rejected or the
// lambda box clips. Starts from warm_start when given, else from zero.
// Accepted steps never decrease the dual value. Throws std::runtime_error if
// a NaN shows up; non-convergence is reported via the flag, not an exception.
DualSolution fit_lambda(const WeightedStats& ws, const FeatureMap& fm, const SolverOptions& opts = {},
                        const std::vector<double>* warm_start = nullptr);

}  // namespace rment

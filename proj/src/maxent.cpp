#include "rment/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace rment {

namespace {

// Fills probs[0..A) with the softmax of the logits lambda . f(s,a) and
// returns log z(s).
double softmax_row(std::span<const double> lambda, const FeatureMap& fm, StateId s,
                   std::span<double> probs) {
  const int A = fm.n_actions;
  double mx = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < A; ++a) {
    probs[a] = fm.dot_active(lambda, s, a);
    mx = std::max(mx, probs[a]);
  }
  double z = 0.0;
  for (int a = 0; a < A; ++a) {
    probs[a] = std::exp(probs[a] - mx);
    z += probs[a];
  }
  for (int a = 0; a < A; ++a) probs[a] /= z;
  return mx + std::log(z);
}

double inf_norm(std::span<const double> v) {
  double n = 0.0;
  for (double x : v) n = std::max(n, std::abs(x));
  return n;
}

void check_lambda_size(std::span<const double> lambda, const FeatureMap& fm) {
  if (static_cast<int>(lambda.size()) != fm.n_features)
    throw std::invalid_argument("lambda length does not match the feature map");
}

}  // namespace

double log_partition(std::span<const double> lambda, const FeatureMap& fm, StateId s) {
  check_lambda_size(lambda, fm);
  fm.check_state_action(s, 0);
  const int A = fm.n_actions;
  double mx = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < A; ++a) mx = std::max(mx, fm.dot_active(lambda, s, a));
  double z = 0.0;
  for (int a = 0; a < A; ++a) z += std::exp(fm.dot_active(lambda, s, a) - mx);
  return mx + std::log(z);
}

Policy policy_from_lambda(std::span<const double> lambda, const FeatureMap& fm) {
  check_lambda_size(lambda, fm);
  Policy pi;
  pi.table = Matrix(fm.n_states, fm.n_actions);
  for (int s = 0; s < fm.n_states; ++s) {
    std::span<double> row(&pi.table(s, 0), static_cast<std::size_t>(fm.n_actions));
    softmax_row(lambda, fm, s, row);
  }
  return pi;
}

double dual_value(std::span<const double> lambda, const WeightedStats& ws, const FeatureMap& fm) {
  check_lambda_size(lambda, fm);
  if (static_cast<int>(ws.p_w.size()) != fm.n_states)
    throw std::invalid_argument("weighted stats do not match the feature map");
  double v = 0.0;
  for (int s = 0; s < fm.n_states; ++s) {
    if (ws.p_w[s] == 0.0) continue;
    v -= ws.p_w[s] * log_partition(lambda, fm, s);
  }
  for (int i = 0; i < fm.n_features; ++i) {
    if (ws.feat_expect[i] != 0.0) v += lambda[i] * ws.feat_expect[i];
  }
  return v;
}

std::vector<double> dual_gradient(std::span<const double> lambda, const WeightedStats& ws,
                                  const FeatureMap& fm) {
  check_lambda_size(lambda, fm);
  if (static_cast<int>(ws.p_w.size()) != fm.n_states)
    throw std::invalid_argument("weighted stats do not match the feature map");
  std::vector<double> g(ws.feat_expect.begin(), ws.feat_expect.end());
  std::vector<double> probs(fm.n_actions);
  for (int s = 0; s < fm.n_states; ++s) {
    if (ws.p_w[s] == 0.0) continue;
    softmax_row(lambda, fm, s, probs);
    for (int a = 0; a < fm.n_actions; ++a) {
      const double m = ws.p_w[s] * probs[a];
      fm.for_each_active(s, a, [&](int i, double v) { g[i] -= m * v; });
    }
  }
  return g;
}

DualSolution fit_lambda(const WeightedStats& ws, const FeatureMap& fm, const SolverOptions& opts,
                        const std::vector<double>* warm_start) {
  const int N = fm.n_features;
  std::vector<double> lambda;
  if (warm_start) {
    if (static_cast<int>(warm_start->size()) != N)
      throw std::invalid_argument("warm start length does not match the feature map");
    lambda = *warm_start;
    for (double& l : lambda) l = std::clamp(l, -opts.lambda_cap, opts.lambda_cap);
  } else {
    lambda.assign(N, 0.0);
  }

  double f = dual_value(lambda, ws, fm);
  if (std::isnan(f)) throw std::runtime_error("dual value is NaN");
  std::vector<double> g = dual_gradient(lambda, ws, fm);
  double gnorm = inf_norm(g);

  DualSolution sol;
  sol.value_trace.push_back(f);

  // L-BFGS curvature pairs; plain gradient steps bootstrap the memory and
  // take over again whenever a quasi-Newton step is rejected.
  constexpr int kMem = 10;
  std::vector<std::vector<double>> s_mem, y_mem;
  std::vector<double> rho_mem;
  std::vector<double> d;
  auto flush = [&] {
    s_mem.clear();
    y_mem.clear();
    rho_mem.clear();
  };
  auto lbfgs_direction = [&] {
    d = g;
    const int m = static_cast<int>(s_mem.size());
    std::vector<double> alpha(m);
    for (int k = m - 1; k >= 0; --k) {
      double sq = 0.0;
      for (int i = 0; i < N; ++i) sq += s_mem[k][i] * d[i];
      alpha[k] = rho_mem[k] * sq;
      for (int i = 0; i < N; ++i) d[i] -= alpha[k] * y_mem[k][i];
    }
    double sy = 0.0, yy = 0.0;
    for (int i = 0; i < N; ++i) {
      sy += s_mem[m - 1][i] * y_mem[m - 1][i];
      yy += y_mem[m - 1][i] * y_mem[m - 1][i];
    }
    const double gamma = sy / yy;
    for (int i = 0; i < N; ++i) d[i] *= gamma;
    for (int k = 0; k < m; ++k) {
      double yq = 0.0;
      for (int i = 0; i < N; ++i) yq += y_mem[k][i] * d[i];
      const double beta = rho_mem[k] * yq;
      for (int i = 0; i < N; ++i) d[i] += s_mem[k][i] * (alpha[k] - beta);
    }
  };

  double step = opts.step_init;
  int iter = 0;
  std::vector<double> trial(N), gnew;
  while (gnorm > opts.tol && iter < opts.max_iter) {
    bool accepted = false;
    bool clipped = false;
    if (!s_mem.empty()) {
      lbfgs_direction();
      double alpha = 1.0;
      for (int bt = 0; bt < 60 && !accepted; ++bt) {
        double ascent = 0.0;
        bool clip = false;
        for (int i = 0; i < N; ++i) {
          const double raw = lambda[i] + alpha * d[i];
          trial[i] = std::clamp(raw, -opts.lambda_cap, opts.lambda_cap);
          if (trial[i] != raw) clip = true;
          ascent += g[i] * (trial[i] - lambda[i]);
        }
        if (ascent > 0.0) {
          const double ft = dual_value(trial, ws, fm);
          if (std::isnan(ft)) throw std::runtime_error("dual value is NaN");
          if (ft >= f + opts.armijo_c1 * ascent) {
            f = ft;
            lambda.swap(trial);
            accepted = true;
            clipped = clip;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!accepted) flush();
    }
    if (!accepted) {
      while (true) {
        double ascent = 0.0;  // g . (projected move), positive unless caps block everything
        bool clip = false;
        for (int i = 0; i < N; ++i) {
          const double raw = lambda[i] + step * g[i];
          trial[i] = std::clamp(raw, -opts.lambda_cap, opts.lambda_cap);
          if (trial[i] != raw) clip = true;
          ascent += g[i] * (trial[i] - lambda[i]);
        }
        if (ascent <= 0.0) break;
        const double ft = dual_value(trial, ws, fm);
        if (std::isnan(ft)) throw std::runtime_error("dual value is NaN");
        if (ft >= f + opts.armijo_c1 * ascent) {
          f = ft;
          lambda.swap(trial);
          accepted = true;
          clipped = clip;
          break;
        }
        step *= 0.5;
        if (step < opts.step_min) break;
      }
      if (!accepted) break;  // stalled on the cap or at step_min, keep best iterate
      step = std::min(step * 2.0, opts.step_max);
    }
    ++iter;
    sol.value_trace.push_back(f);
    gnew = dual_gradient(lambda, ws, fm);
    for (double gi : gnew)
      if (std::isnan(gi)) throw std::runtime_error("dual gradient is NaN");
    if (clipped) {
      flush();
    } else {
      // trial still holds the previous iterate after the accept swap
      double sy = 0.0, ss = 0.0, yy = 0.0;
      for (int i = 0; i < N; ++i) {
        const double si = lambda[i] - trial[i];
        const double yi = g[i] - gnew[i];
        sy += si * yi;
        ss += si * si;
        yy += yi * yi;
      }
      if (sy > 1e-10 * std::sqrt(ss * yy)) {
        std::vector<double> sv(N), yv(N);
        for (int i = 0; i < N; ++i) {
          sv[i] = lambda[i] - trial[i];
          yv[i] = g[i] - gnew[i];
        }
        s_mem.push_back(std::move(sv));
        y_mem.push_back(std::move(yv));
        rho_mem.push_back(1.0 / sy);
        if (static_cast<int>(s_mem.size()) > kMem) {
          s_mem.erase(s_mem.begin());
          y_mem.erase(y_mem.begin());
          rho_mem.erase(rho_mem.begin());
        }
      }
    }
    g.swap(gnew);
    gnorm = inf_norm(g);
  }

  sol.dual_value = f;
  sol.grad_norm = gnorm;
  sol.iterations = iter;
  sol.converged = gnorm <= opts.tol;
  for (double l : lambda)
    if (std::abs(l) >= opts.lambda_cap) sol.boundary_hit = true;
  sol.log_z.resize(fm.n_states);
  for (int s = 0; s < fm.n_states; ++s) sol.log_z[s] = log_partition(lambda, fm, s);
  sol.lambda = std::move(lambda);
  return sol;
}

}  // namespace rment

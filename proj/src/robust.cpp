#include "rment/robust.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rment {

namespace {

double inf_diff(std::span<const double> x, std::span<const double> y) {
  double n = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) n = std::max(n, std::abs(x[i] - y[i]));
  return n;
}

// Relative tie test with an absolute floor: inner-solver noise in c is
// absolute (it does not scale down with |c|), so a purely relative threshold
// would split structurally tied demos once |c| gets small.
bool tied(double ci, double cj, double rel_tol) {
  return std::abs(ci - cj) <= rel_tol * std::max({1.0, std::abs(ci), std::abs(cj)});
}

double mixture_objective(std::span<const double> w, std::span<const double> c, double m) {
  double s = 0.0;
  for (std::size_t d = 0; d < w.size(); ++d) s += w[d] * c[d];
  return -s / m;
}

}  // namespace

PerDemoTerms per_demo_terms(std::span<const double> lambda, const std::vector<DemoStats>& stats,
                            const FeatureMap& fm, std::span<const double> log_z) {
  if (static_cast<int>(lambda.size()) != fm.n_features)
    throw std::invalid_argument("lambda length does not match the feature map");
  if (static_cast<int>(log_z.size()) != fm.n_states)
    throw std::invalid_argument("log_z length does not match the state count");
  const std::size_t D = stats.size();
  PerDemoTerms t;
  t.a.resize(D);
  t.b.resize(D);
  t.c.resize(D);
  for (std::size_t d = 0; d < D; ++d) {
    const DemoStats& st = stats[d];
    if (st.n_states != fm.n_states || st.n_actions != fm.n_actions)
      throw std::invalid_argument("demo statistics do not match the feature map");
    double a = 0.0;
    for (int s = 0; s < st.n_states; ++s)
      if (st.state_dist[s] != 0.0) a += st.state_dist[s] * log_z[s];
    double b = 0.0;
    for (int i = 0; i < fm.n_features; ++i)
      if (st.feat_expect[i] != 0.0) b += lambda[i] * st.feat_expect[i];
    t.a[d] = a;
    t.b[d] = b;
    t.c[d] = b - a;
  }
  return t;
}

WeightVector weight_step(std::span<const double> c, double m, double tie_rel_tol) {
  const int D = static_cast<int>(c.size());
  if (D == 0) throw std::invalid_argument("weight step needs at least one demo");
  if (!(m > 0.0) || m > static_cast<double>(D))
    throw std::invalid_argument("trust budget must lie in (0, D]");

  std::vector<int> order(D);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (c[i] != c[j]) return c[i] > c[j];
    return i < j;
  });

  WeightVector out;
  out.m = m;
  out.w.assign(D, 0.0);
  double remaining = m;
  int pos = 0;
  while (pos < D && remaining > 0.0) {
    int end = pos + 1;
    while (end < D && tied(c[order[end - 1]], c[order[end]], tie_rel_tol)) ++end;
    const int g = end - pos;
    if (remaining >= static_cast<double>(g)) {
      for (int k = pos; k < end; ++k) out.w[order[k]] = 1.0;
      remaining -= static_cast<double>(g);
    } else {
      const double share = remaining / g;
      for (int k = pos; k < end; ++k) out.w[order[k]] = share;
      remaining = 0.0;
    }
    pos = end;
  }
  return out;
}

RobustModel fit_robust(const DemoSet& demos, const FeatureMap& fm, double m,
                       const OuterOptions& opts) {
  const int D = demos.size();
  if (D == 0) throw std::invalid_argument("no demonstrations");
  if (!(m > 0.0) || m > static_cast<double>(D))
    throw std::invalid_argument("trust budget must lie in (0, D]");
  if (opts.max_outer < 1) throw std::invalid_argument("max_outer must be at least 1");

  std::vector<DemoStats> stats;
  stats.reserve(D);
  for (const Demonstration& d : demos.demos) stats.push_back(demo_stats(d, demos.task, fm));

  RobustModel out;
  WeightVector w;
  w.m = m;
  w.w.assign(D, m / D);
  std::vector<double> lambda(fm.n_features, 0.0);

  std::vector<std::vector<double>> seen;
  seen.push_back(w.w);

  double best_obj = std::numeric_limits<double>::infinity();
  DualSolution best_dual;
  WeightVector best_w;
  std::vector<double> best_c;

  for (int outer = 0; outer < opts.max_outer; ++outer) {
    const WeightedStats ws = weighted_mixture(stats, w, fm);
    // Coordinates with no mixture support have zero gradient and would keep
    // stale warm-start values; reset them so excluded demos are scored
    // against uniform rows there.
    for (int s = 0; s < fm.n_states; ++s) {
      if (ws.p_w[s] != 0.0) continue;
      for (int a = 0; a < fm.n_actions; ++a) lambda[fm.hot_index(s, a)] = 0.0;
    }
    DualSolution dual = fit_lambda(ws, fm, opts.inner, &lambda);
    out.inner_converged = out.inner_converged && dual.converged;
    lambda = dual.lambda;

    PerDemoTerms terms = per_demo_terms(lambda, stats, fm, dual.log_z);
    const double obj = mixture_objective(w.w, terms.c, m);
    out.history.push_back({obj, w.w});
    if (obj < best_obj) {
      best_obj = obj;
      best_dual = dual;
      best_w = w;
      best_c = terms.c;
    }

    WeightVector w_next = weight_step(terms.c, m, opts.tie_rel_tol);
    if (inf_diff(w_next.w, w.w) < opts.w_tol) {
      out.converged = true;
      out.dual = std::move(dual);
      out.weights = std::move(w);
      out.objective = obj;
      out.c = std::move(terms.c);
      return out;
    }
    for (const std::vector<double>& past : seen) {
      if (inf_diff(w_next.w, past) < opts.w_tol) {
        out.oscillated = true;
        break;
      }
    }
    if (out.oscillated) break;
    w = std::move(w_next);
    seen.push_back(w.w);
  }

  out.converged = false;
  out.dual = std::move(best_dual);
  out.weights = std::move(best_w);
  out.objective = best_obj;
  out.c = std::move(best_c);
  return out;
}

}  // namespace rment

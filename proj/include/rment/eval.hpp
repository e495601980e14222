#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rment/core.hpp"
#include "rment/envs.hpp"

namespace rment {

// Pooled-count tabular MLE over all demos; unvisited states get uniform rows.
Policy bc_mle_fit(const DemoSet& demos);

// Fraction of the 24 non-goal grid states whose argmax action (lowest index
// on ties) is optimal.
double grid_accuracy(const Policy& policy);

struct ReturnStats {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
};

// Seeded Monte-Carlo estimate; episode e rolls out with seed + e.
ReturnStats expected_return(const Policy& policy, EnvKind env, int n_episodes, std::uint64_t seed);

struct SweepRow {
  std::string alg;
  std::string task;
  int n_correct = 0;
  int n_adversarial = 0;
  double m = 1.0;
  std::string metric;
  double value = 0.0;
  std::uint64_t seed = 0;
  bool error = false;
  std::string error_msg;
  std::vector<double> weights;  // fitted demo weights, rment rows only
  bool converged = true;
};

// For each adversarial count 0..n_adversarial: the same n_correct correct
// demos (seeds seed .. seed+n_correct-1 in every row) plus count flipped
// demos (seeds seed .. seed+count-1), one row per (alg, count). Grid rows
// report accuracy; mountain-car rows report mean return over 100 episodes
// seeded per row (seed + count). Fit errors land in the row and the sweep
// keeps going.
std::vector<SweepRow> robustness_sweep(EnvKind env, int n_correct, int n_adversarial,
                                       const std::vector<std::string>& algs, double m,
                                       std::uint64_t seed);

// Schema: alg,task,n_correct,n_adversarial,M,metric,value,seed
// Floats are printed with %.17g; failed rows carry the literal `error` in the
// value column.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace rment

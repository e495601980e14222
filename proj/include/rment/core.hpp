#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rment {

using StateId = int;
using ActionId = int;

// One (state, action) pair of a demonstration.
struct Step {
  StateId s = 0;
  ActionId a = 0;
  bool operator==(const Step&) const = default;
};

// Dense row-major matrix, sized once and indexed (row, col).
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

// Uniform binning of one continuous state dimension.
struct DiscretizerDim {
  double lo = 0.0;
  double hi = 1.0;
  int bins = 1;
  bool operator==(const DiscretizerDim&) const = default;
};

// Task dimensions plus the continuous-state binning. An empty `dims` means
// the task is natively tabular and discretize() is the identity on the
// single integer coordinate.
struct TaskSpec {
  std::string name;
  int n_states = 0;
  int n_actions = 0;
  std::vector<DiscretizerDim> dims;

  void validate() const;

  // Maps a continuous state to its cell index (row-major, first dimension
  // slowest). Marginally out-of-range coordinates clamp to the edge bins.
  StateId discretize(std::span<const double> x) const;

  bool operator==(const TaskSpec&) const = default;
};

struct Demonstration {
  std::string demo_id;
  std::vector<Step> steps;
  // Continuous states before discretization, one per step; empty for
  // natively tabular tasks.
  std::vector<std::vector<double>> raw_states;

  bool operator==(const Demonstration&) const = default;
};

// Throws std::invalid_argument if the demo is empty or indexes outside the
// task bounds.
void validate_demo(const Demonstration& demo, const TaskSpec& task);

struct DemoSet {
  TaskSpec task;
  std::vector<Demonstration> demos;

  // Validates every demo against the task and checks demo_id uniqueness.
  static DemoSet create(TaskSpec task, std::vector<Demonstration> demos);

  int size() const { return static_cast<int>(demos.size()); }
};

enum class FeatureSpec {
  kTabularIndicator,  // one indicator per (state, action) pair
  kTiledIndicator,    // indicator over the task's tiling crossed with actions
};

// Indicator feature map over the discretized state space: exactly one hot
// entry per (s, a), at index s * n_actions + a.
class FeatureMap {
 public:
  FeatureSpec spec = FeatureSpec::kTabularIndicator;
  int n_states = 0;
  int n_actions = 0;
  int n_features = 0;

  static FeatureMap build(FeatureSpec spec, const TaskSpec& task);

  std::vector<double> feature_vector(StateId s, ActionId a) const;

  int hot_index(StateId s, ActionId a) const { return s * n_actions + a; }

  // Visits the nonzero entries of f(s, a) as (feature index, value) pairs.
  template <class Fn>
  void for_each_active(StateId s, ActionId a, Fn&& fn) const {
    fn(hot_index(s, a), 1.0);
  }

  // dot(v, f(s, a)) without materializing the dense vector.
  double dot_active(std::span<const double> v, StateId s, ActionId a) const {
    return v[static_cast<std::size_t>(hot_index(s, a))];
  }

  void check_state_action(StateId s, ActionId a) const;
};

// Row-stochastic action distribution table, one row per state.
struct Policy {
  Matrix table;

  int n_states() const { return table.rows; }
  int n_actions() const { return table.cols; }

  // Lowest index wins ties.
  ActionId argmax(StateId s) const;
};

}  // namespace rment

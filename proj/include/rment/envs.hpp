#pragma once

#include <cstdint>
#include <vector>

#include "rment/core.hpp"
#include "rment/rng.hpp"

namespace rment {

// 5x5 grid, start in the lower-left cell, goal in the upper-right cell.
// Deterministic moves; walking off the grid stays in place; the goal is
// absorbing. State id = y * kWidth + x with y growing upward.
struct GridWorld {
  static constexpr int kWidth = 5;
  static constexpr int kHeight = 5;
  static constexpr int kNStates = kWidth * kHeight;
  static constexpr int kNActions = 4;
  enum Action : ActionId { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };
  static constexpr StateId kStart = 0;
  static constexpr StateId kGoal = kNStates - 1;
  static constexpr int kMaxEpisodeSteps = 50;

  static StateId state_id(int x, int y) { return y * kWidth + x; }
  static StateId next_state(StateId s, ActionId a);
  // Actions that strictly decrease Manhattan distance to the goal; at the
  // goal itself every action (absorbing).
  static std::vector<ActionId> optimal_actions(StateId s);
  static ActionId flip_action(ActionId a);  // up<->down, left<->right
  static TaskSpec task_spec();
};

// Classic mountain car: thrust 0.001 against gravity 0.0025 cos(3p), goal at
// p >= 0.5, reward -1 per step, 200-step cap. Velocity is clamped to the box
// and zeroed on hitting the left wall.
struct MountainCar {
  struct State {
    double pos = 0.0;
    double vel = 0.0;
  };
  static constexpr int kNActions = 3;
  enum Action : ActionId { kPushLeft = 0, kNoOp = 1, kPushRight = 2 };
  static constexpr double kMinPos = -1.2;
  static constexpr double kMaxPos = 0.6;
  static constexpr double kMaxVel = 0.07;
  static constexpr double kGoalPos = 0.5;
  static constexpr int kMaxEpisodeSteps = 200;
  static constexpr int kPosBins = 20;
  static constexpr int kVelBins = 20;

  static State next_state(const State& st, ActionId a);
  static bool is_goal(const State& st) { return st.pos >= kGoalPos; }
  // pos uniform in [-0.6, -0.4), vel 0.
  static State initial_state(RngStream& rng);
  static ActionId flip_action(ActionId a);  // push-left<->push-right, no-op fixed
  static TaskSpec task_spec();              // kPosBins x kVelBins tiling
};

enum class EnvKind { kGridWorld, kMountainCar };

enum class DemoKind { kCorrect, kAdversarial, kRandom };

TaskSpec env_task_spec(EnvKind env);
int env_max_steps(EnvKind env);

// Correct: grid - a seed-selected monotone shortest path; mountain car - a
// scripted expert that pushes along the current velocity sign (throws if it
// misses the goal within the cap, which would mean broken dynamics).
// Adversarial: the correct demo's action sequence with every action flipped,
// re-simulated from the same start so states stay dynamically consistent.
// Random: uniform actions until the goal or the step cap.
Demonstration gen_demo(EnvKind env, DemoKind kind, std::uint64_t seed);

struct RolloutResult {
  std::vector<Step> trajectory;
  double ret = 0.0;
  bool reached_goal = false;
};

// Samples actions from the policy rows with a seeded generator. Return is 1/0
// goal-reached for the grid and -(steps taken) for mountain car.
RolloutResult rollout(const Policy& policy, EnvKind env, std::uint64_t seed, int max_steps);

}  // namespace rment

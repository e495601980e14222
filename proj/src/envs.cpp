#include "rment/envs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace rment {

namespace {

int choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return static_cast<int>(r);
}

// Lexicographic rank -> k-subset of {0..n-1}.
std::vector<int> unrank_subset(int n, int k, int rank) {
  std::vector<int> out;
  out.reserve(k);
  int x = 0;
  for (int i = 0; i < k; ++i) {
    while (true) {
      const int block = choose(n - 1 - x, k - 1 - i);
      if (rank < block) break;
      rank -= block;
      ++x;
    }
    out.push_back(x);
    ++x;
  }
  return out;
}

std::string demo_name(EnvKind env, DemoKind kind, std::uint64_t seed) {
  const char* e = env == EnvKind::kGridWorld ? "gridworld" : "mountaincar";
  const char* k = kind == DemoKind::kCorrect       ? "correct"
                  : kind == DemoKind::kAdversarial ? "adversarial"
                                                   : "random";
  return std::string(e) + "-" + k + "-" + std::to_string(seed);
}

// Shortest monotone path: which of the 8 moves go up (the rest go right),
// chosen by seed as a ranked 4-subset of the move slots.
std::vector<ActionId> grid_correct_actions(std::uint64_t seed) {
  const int n = GridWorld::kWidth - 1 + GridWorld::kHeight - 1;
  const int k = GridWorld::kHeight - 1;
  const int rank = static_cast<int>(seed % static_cast<std::uint64_t>(choose(n, k)));
  std::vector<int> up_slots = unrank_subset(n, k, rank);
  std::vector<ActionId> acts(n, GridWorld::kRight);
  for (int slot : up_slots) acts[slot] = GridWorld::kUp;
  return acts;
}

Demonstration simulate_grid(std::span<const ActionId> actions, std::string id) {
  Demonstration d;
  d.demo_id = std::move(id);
  StateId s = GridWorld::kStart;
  for (ActionId a : actions) {
    if (s == GridWorld::kGoal) break;
    d.steps.push_back({s, a});
    s = GridWorld::next_state(s, a);
  }
  return d;
}

Demonstration simulate_mc(MountainCar::State st, std::span<const ActionId> actions, std::string id) {
  const TaskSpec task = MountainCar::task_spec();
  Demonstration d;
  d.demo_id = std::move(id);
  for (ActionId a : actions) {
    if (MountainCar::is_goal(st)) break;
    const std::array<double, 2> x{st.pos, st.vel};
    d.steps.push_back({task.discretize(x), a});
    d.raw_states.push_back({st.pos, st.vel});
    st = MountainCar::next_state(st, a);
  }
  return d;
}

Demonstration gen_mc_correct(std::uint64_t seed, std::string id) {
  RngStream rng(seed);
  MountainCar::State st = MountainCar::initial_state(rng);
  const TaskSpec task = MountainCar::task_spec();
  Demonstration d;
  d.demo_id = std::move(id);
  for (int t = 0; t < MountainCar::kMaxEpisodeSteps && !MountainCar::is_goal(st); ++t) {
    const ActionId a = st.vel >= 0.0 ? MountainCar::kPushRight : MountainCar::kPushLeft;
    const std::array<double, 2> x{st.pos, st.vel};
    d.steps.push_back({task.discretize(x), a});
    d.raw_states.push_back({st.pos, st.vel});
    st = MountainCar::next_state(st, a);
  }
  if (!MountainCar::is_goal(st))
    throw std::runtime_error("scripted mountain-car expert missed the goal; dynamics are broken");
  return d;
}

}  // namespace

StateId GridWorld::next_state(StateId s, ActionId a) {
  if (s < 0 || s >= kNStates) throw std::invalid_argument("grid state out of range");
  if (s == kGoal) return s;
  int x = s % kWidth;
  int y = s / kWidth;
  switch (a) {
    case kUp: ++y; break;
    case kDown: --y; break;
    case kLeft: --x; break;
    case kRight: ++x; break;
    default: throw std::invalid_argument("grid action out of range");
  }
  if (x < 0 || x >= kWidth || y < 0 || y >= kHeight) return s;
  return state_id(x, y);
}

std::vector<ActionId> GridWorld::optimal_actions(StateId s) {
  if (s < 0 || s >= kNStates) throw std::invalid_argument("grid state out of range");
  if (s == kGoal) return {kUp, kDown, kLeft, kRight};
  const int x = s % kWidth;
  const int y = s / kWidth;
  std::vector<ActionId> out;
  if (y < kHeight - 1) out.push_back(kUp);
  if (x < kWidth - 1) out.push_back(kRight);
  return out;
}

ActionId GridWorld::flip_action(ActionId a) {
  switch (a) {
    case kUp: return kDown;
    case kDown: return kUp;
    case kLeft: return kRight;
    case kRight: return kLeft;
    default: throw std::invalid_argument("grid action out of range");
  }
}

TaskSpec GridWorld::task_spec() {
  TaskSpec t;
  t.name = "gridworld";
  t.n_states = kNStates;
  t.n_actions = kNActions;
  return t;
}

MountainCar::State MountainCar::next_state(const State& st, ActionId a) {
  if (a < 0 || a >= kNActions) throw std::invalid_argument("mountain-car action out of range");
  double v = st.vel + 0.001 * (a - 1) - 0.0025 * std::cos(3.0 * st.pos);
  v = std::clamp(v, -kMaxVel, kMaxVel);
  const double p = std::clamp(st.pos + v, kMinPos, kMaxPos);
  if (p <= kMinPos && v < 0.0) v = 0.0;
  return {p, v};
}

MountainCar::State MountainCar::initial_state(RngStream& rng) {
  return {-0.6 + 0.2 * rng.uniform01(), 0.0};
}

ActionId MountainCar::flip_action(ActionId a) {
  switch (a) {
    case kPushLeft: return kPushRight;
    case kNoOp: return kNoOp;
    case kPushRight: return kPushLeft;
    default: throw std::invalid_argument("mountain-car action out of range");
  }
}

TaskSpec MountainCar::task_spec() {
  TaskSpec t;
  t.name = "mountaincar";
  t.n_states = kPosBins * kVelBins;
  t.n_actions = kNActions;
  t.dims = {{kMinPos, kMaxPos, kPosBins}, {-kMaxVel, kMaxVel, kVelBins}};
  return t;
}

TaskSpec env_task_spec(EnvKind env) {
  return env == EnvKind::kGridWorld ? GridWorld::task_spec() : MountainCar::task_spec();
}

int env_max_steps(EnvKind env) {
  return env == EnvKind::kGridWorld ? GridWorld::kMaxEpisodeSteps : MountainCar::kMaxEpisodeSteps;
}

Demonstration gen_demo(EnvKind env, DemoKind kind, std::uint64_t seed) {
  std::string id = demo_name(env, kind, seed);
  if (env == EnvKind::kGridWorld) {
    switch (kind) {
      case DemoKind::kCorrect:
        return simulate_grid(grid_correct_actions(seed), std::move(id));
      case DemoKind::kAdversarial: {
        std::vector<ActionId> acts = grid_correct_actions(seed);
        for (ActionId& a : acts) a = GridWorld::flip_action(a);
        return simulate_grid(acts, std::move(id));
      }
      case DemoKind::kRandom: {
        RngStream rng(seed);
        Demonstration d;
        d.demo_id = std::move(id);
        StateId s = GridWorld::kStart;
        for (int t = 0; t < GridWorld::kMaxEpisodeSteps && s != GridWorld::kGoal; ++t) {
          const ActionId a = rng.uniform_int(GridWorld::kNActions);
          d.steps.push_back({s, a});
          s = GridWorld::next_state(s, a);
        }
        return d;
      }
    }
  } else {
    switch (kind) {
      case DemoKind::kCorrect:
        return gen_mc_correct(seed, std::move(id));
      case DemoKind::kAdversarial: {
        const Demonstration correct = gen_mc_correct(seed, "tmp");
        std::vector<ActionId> acts;
        acts.reserve(correct.steps.size());
        for (const Step& st : correct.steps) acts.push_back(MountainCar::flip_action(st.a));
        RngStream rng(seed);  // same stream position as the correct run's start draw
        return simulate_mc(MountainCar::initial_state(rng), acts, std::move(id));
      }
      case DemoKind::kRandom: {
        RngStream rng(seed);
        MountainCar::State st = MountainCar::initial_state(rng);
        const TaskSpec task = MountainCar::task_spec();
        Demonstration d;
        d.demo_id = std::move(id);
        for (int t = 0; t < MountainCar::kMaxEpisodeSteps && !MountainCar::is_goal(st); ++t) {
          const ActionId a = rng.uniform_int(MountainCar::kNActions);
          const std::array<double, 2> x{st.pos, st.vel};
          d.steps.push_back({task.discretize(x), a});
          d.raw_states.push_back({st.pos, st.vel});
          st = MountainCar::next_state(st, a);
        }
        return d;
      }
    }
  }
  throw std::invalid_argument("unknown demo kind");
}

RolloutResult rollout(const Policy& policy, EnvKind env, std::uint64_t seed, int max_steps) {
  RngStream rng(seed);
  RolloutResult r;
  if (env == EnvKind::kGridWorld) {
    if (policy.n_states() != GridWorld::kNStates || policy.n_actions() != GridWorld::kNActions)
      throw std::invalid_argument("policy dimensions do not match the grid task");
    StateId s = GridWorld::kStart;
    for (int t = 0; t < max_steps && s != GridWorld::kGoal; ++t) {
      std::span<const double> row(
          policy.table.data.data() + static_cast<std::size_t>(s) * policy.table.cols,
          static_cast<std::size_t>(policy.table.cols));
      const ActionId a = rng.sample(row);
      r.trajectory.push_back({s, a});
      s = GridWorld::next_state(s, a);
    }
    r.reached_goal = s == GridWorld::kGoal;
    r.ret = r.reached_goal ? 1.0 : 0.0;
  } else {
    const TaskSpec task = MountainCar::task_spec();
    if (policy.n_states() != task.n_states || policy.n_actions() != task.n_actions)
      throw std::invalid_argument("policy dimensions do not match the mountain-car task");
    MountainCar::State st = MountainCar::initial_state(rng);
    int steps = 0;
    while (steps < max_steps && !MountainCar::is_goal(st)) {
      const std::array<double, 2> x{st.pos, st.vel};
      const StateId s = task.discretize(x);
      std::span<const double> row(
          policy.table.data.data() + static_cast<std::size_t>(s) * policy.table.cols,
          static_cast<std::size_t>(policy.table.cols));
      const ActionId a = rng.sample(row);
      r.trajectory.push_back({s, a});
      st = MountainCar::next_state(st, a);
      ++steps;
    }
    r.reached_goal = MountainCar::is_goal(st);
    r.ret = -static_cast<double>(steps);
  }
  return r;
}

}  // namespace rment

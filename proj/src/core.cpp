#include "rment/core.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace rment {

void TaskSpec::validate() const {
  if (n_states < 1) throw std::invalid_argument("TaskSpec: n_states must be >= 1");
  if (n_actions < 2) throw std::invalid_argument("TaskSpec: n_actions must be >= 2");
  long long cells = 1;
  for (const auto& d : dims) {
    if (d.bins < 1) throw std::invalid_argument("TaskSpec: bins must be >= 1");
    if (!(d.lo < d.hi)) throw std::invalid_argument("TaskSpec: dimension range must be non-empty");
    cells *= d.bins;
  }
  if (!dims.empty() && cells != n_states)
    throw std::invalid_argument("TaskSpec: discretizer cell count does not match n_states");
}

StateId TaskSpec::discretize(std::span<const double> x) const {
  if (dims.empty()) {
    if (x.size() != 1) throw std::invalid_argument("discretize: identity task expects one coordinate");
    StateId s = static_cast<StateId>(std::llround(x[0]));
    if (s < 0 || s >= n_states) throw std::invalid_argument("discretize: state index out of range");
    return s;
  }
  if (x.size() != dims.size()) throw std::invalid_argument("discretize: dimension mismatch");
  StateId index = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const auto& d = dims[i];
    double v = x[i];
    if (v < d.lo) v = d.lo;
    if (v > d.hi) v = d.hi;
    double width = (d.hi - d.lo) / d.bins;
    int bin = static_cast<int>(std::floor((v - d.lo) / width));
    if (bin < 0) bin = 0;
    if (bin >= d.bins) bin = d.bins - 1;  // v == hi lands here
    index = index * d.bins + bin;
  }
  return index;
}

void validate_demo(const Demonstration& demo, const TaskSpec& task) {
  if (demo.steps.empty()) throw std::invalid_argument("demo '" + demo.demo_id + "' has no steps");
  for (const Step& st : demo.steps) {
    if (st.s < 0 || st.s >= task.n_states)
      throw std::invalid_argument("demo '" + demo.demo_id + "' has out-of-range state " + std::to_string(st.s));
    if (st.a < 0 || st.a >= task.n_actions)
      throw std::invalid_argument("demo '" + demo.demo_id + "' has out-of-range action " + std::to_string(st.a));
  }
  if (!demo.raw_states.empty() && demo.raw_states.size() != demo.steps.size())
    throw std::invalid_argument("demo '" + demo.demo_id + "' raw state count does not match steps");
}

DemoSet DemoSet::create(TaskSpec task, std::vector<Demonstration> demos) {
  task.validate();
  if (demos.empty()) throw std::invalid_argument("DemoSet: need at least one demonstration");
  std::set<std::string> ids;
  for (const auto& d : demos) {
    validate_demo(d, task);
    if (!ids.insert(d.demo_id).second)
      throw std::invalid_argument("DemoSet: duplicate demo_id '" + d.demo_id + "'");
  }
  return DemoSet{std::move(task), std::move(demos)};
}

FeatureMap FeatureMap::build(FeatureSpec spec, const TaskSpec& task) {
  task.validate();
  if (spec == FeatureSpec::kTiledIndicator && task.dims.empty())
    throw std::invalid_argument("FeatureMap: tiled features need a task with a continuous discretizer");
  FeatureMap fm;
  fm.spec = spec;
  fm.n_states = task.n_states;
  fm.n_actions = task.n_actions;
  fm.n_features = task.n_states * task.n_actions;
  return fm;
}

void FeatureMap::check_state_action(StateId s, ActionId a) const {
  if (s < 0 || s >= n_states) throw std::invalid_argument("FeatureMap: state out of range");
  if (a < 0 || a >= n_actions) throw std::invalid_argument("FeatureMap: action out of range");
}

std::vector<double> FeatureMap::feature_vector(StateId s, ActionId a) const {
  check_state_action(s, a);
  std::vector<double> f(n_features, 0.0);
  for_each_active(s, a, [&](int i, double v) { f[i] = v; });
  return f;
}

ActionId Policy::argmax(StateId s) const {
  ActionId best = 0;
  for (int a = 1; a < table.cols; ++a)
    if (table(s, a) > table(s, best)) best = a;
  return best;
}

}  // namespace rment

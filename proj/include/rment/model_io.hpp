#pragma once

#include <string>
#include <vector>

#include "rment/core.hpp"
#include "rment/robust.hpp"

namespace rment {

struct SolverMeta {
  double inner_tol = 0.0;
  int inner_max_iter = 0;
  int outer_iterations = 0;
  bool converged = false;
  bool oscillated = false;
  bool inner_converged = false;
  bool boundary_hit = false;
  double grad_norm = 0.0;
  double dual_value = 0.0;
  double objective = 0.0;
};

// On-disk model, format version 1. JSON round-trips losslessly (doubles are
// emitted as shortest exact representations).
struct ModelFile {
  int version = 1;
  TaskSpec task;
  FeatureSpec feature_spec = FeatureSpec::kTabularIndicator;
  int n_features = 0;
  std::vector<double> lambda;
  std::vector<double> weights;
  double m = 1.0;
  std::vector<std::string> demo_ids;
  std::vector<double> c;
  std::vector<OuterIterate> history;
  SolverMeta meta;
};

ModelFile make_model_file(const RobustModel& model, const TaskSpec& task, FeatureSpec spec,
                          const std::vector<std::string>& demo_ids, const OuterOptions& opts);

std::string model_to_json(const ModelFile& mf);
// Throws std::runtime_error on malformed or wrong-version input.
ModelFile model_from_json(const std::string& text);

void save_model(const std::string& path, const ModelFile& mf);
ModelFile load_model(const std::string& path);

}  // namespace rment

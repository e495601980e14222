#include "rment/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "rment/demo_io.hpp"
#include "rment/envs.hpp"
#include "rment/eval.hpp"
#include "rment/maxent.hpp"
#include "rment/model_io.hpp"
#include "rment/robust.hpp"

namespace rment {

namespace {

using ordered_json = nlohmann::ordered_json;

EnvKind env_from_name(const std::string& name) {
  if (name == "gridworld") return EnvKind::kGridWorld;
  if (name == "mountaincar") return EnvKind::kMountainCar;
  throw std::invalid_argument("unknown environment '" + name + "'");
}

DemoKind kind_from_name(const std::string& name) {
  if (name == "correct") return DemoKind::kCorrect;
  if (name == "adversarial") return DemoKind::kAdversarial;
  if (name == "random") return DemoKind::kRandom;
  throw std::invalid_argument("unknown demo kind '" + name + "'");
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct GenArgs {
  std::string env = "gridworld";
  std::string kind = "correct";
  int n = 1;
  std::uint64_t seed = 0;
  std::string out_path;
};

int run_gen_demos(const GenArgs& a, std::ostream& out, std::ostream& err) {
  const EnvKind env = env_from_name(a.env);
  const DemoKind kind = kind_from_name(a.kind);
  std::vector<Demonstration> demos;
  demos.reserve(a.n);
  for (int i = 0; i < a.n; ++i)
    demos.push_back(gen_demo(env, kind, a.seed + static_cast<std::uint64_t>(i)));
  try {
    write_demos_file(a.out_path, demos);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  for (const Demonstration& d : demos)
    out << "wrote " << d.demo_id << ": " << d.steps.size() << " steps\n";
  return 0;
}

struct FitArgs {
  std::vector<std::string> demo_files;
  std::string env = "gridworld";
  std::string features = "auto";
  double m = 1.0;
  double tol = 1e-9;
  int max_outer = 50;
  std::string out_path;
};

int run_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  const TaskSpec task = env_task_spec(env_from_name(a.env));

  std::vector<Demonstration> demos;
  for (const std::string& file : a.demo_files) {
    try {
      std::vector<Demonstration> part = read_demos_file(file);
      demos.insert(demos.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
    } catch (const DemoParseError& e) {
      err << file << ":" << e.line << ": " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      err << e.what() << "\n";
      return 1;
    }
  }

  if (demos.empty()) {
    err << "no demonstrations in the given files\n";
    return 2;
  }
  if (a.m > static_cast<double>(demos.size())) {
    err << "--m (" << a.m << ") exceeds the number of demos (" << demos.size() << ")\n";
    return 2;
  }

  DemoSet ds;
  try {
    ds = DemoSet::create(task, std::move(demos));
  } catch (const std::exception& e) {
    err << "invalid demo data: " << e.what() << "\n";
    return 1;
  }

  FeatureSpec spec;
  if (a.features == "tabular") {
    spec = FeatureSpec::kTabularIndicator;
  } else if (a.features == "tiled") {
    spec = FeatureSpec::kTiledIndicator;
  } else {
    spec = task.dims.empty() ? FeatureSpec::kTabularIndicator : FeatureSpec::kTiledIndicator;
  }
  FeatureMap fm;
  try {
    fm = FeatureMap::build(spec, task);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 2;
  }

  OuterOptions opts;
  opts.inner.tol = a.tol;
  opts.max_outer = a.max_outer;

  RobustModel model;
  try {
    model = fit_robust(ds, fm, a.m, opts);
  } catch (const std::exception& e) {
    err << "fit failed: " << e.what() << "\n";
    return 1;
  }

  std::vector<std::string> ids;
  ids.reserve(ds.demos.size());
  for (const Demonstration& d : ds.demos) ids.push_back(d.demo_id);
  try {
    save_model(a.out_path, make_model_file(model, task, spec, ids, opts));
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }

  std::size_t id_width = 8;
  for (const std::string& id : ids) id_width = std::max(id_width, id.size());
  out << std::left << std::setw(static_cast<int>(id_width) + 2) << "demo_id" << std::right
      << std::setw(10) << "weight" << std::setw(16) << "c_d" << "\n";
  for (std::size_t d = 0; d < ids.size(); ++d) {
    std::ostringstream w_s, c_s;
    w_s << std::fixed << std::setprecision(4) << model.weights.w[d];
    c_s << std::setprecision(6) << model.c[d];
    out << std::left << std::setw(static_cast<int>(id_width) + 2) << ids[d] << std::right
        << std::setw(10) << w_s.str() << std::setw(16) << c_s.str() << "\n";
  }

  if (!model.converged) {
    err << "outer loop stopped without weight convergence; best iterate written to " << a.out_path
        << "\n";
    return 3;
  }
  return 0;
}

struct EvalArgs {
  std::string model_path;
  std::string metric = "accuracy";
  int episodes = 100;
  std::uint64_t seed = 0;
};

int run_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  ModelFile mf;
  try {
    mf = load_model(a.model_path);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }

  EnvKind env;
  try {
    env = env_from_name(mf.task.name);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }

  if (a.metric == "accuracy" && env != EnvKind::kGridWorld) {
    err << "accuracy is only defined for the gridworld task\n";
    return 2;
  }

  FeatureMap fm;
  Policy pi;
  try {
    fm = FeatureMap::build(mf.feature_spec, mf.task);
    pi = policy_from_lambda(mf.lambda, fm);
  } catch (const std::exception& e) {
    err << "model is inconsistent: " << e.what() << "\n";
    return 1;
  }

  ordered_json report;
  report["task"] = mf.task.name;
  report["metric"] = a.metric;
  if (a.metric == "accuracy") {
    report["value"] = grid_accuracy(pi);
    report["n_states"] = GridWorld::kNStates - 1;
  } else {
    const ReturnStats rs = expected_return(pi, env, a.episodes, a.seed);
    report["value"] = rs.mean;
    report["stddev"] = rs.stddev;
    report["n_episodes"] = a.episodes;
  }
  report["seed"] = a.seed;
  report["m"] = mf.m;
  report["weights"] = mf.weights;
  report["converged"] = mf.meta.converged;
  out << report.dump() << "\n";
  return 0;
}

struct SweepArgs {
  std::string env = "gridworld";
  int n_correct = 2;
  int n_adversarial = 0;
  std::string algs = "rment,bc";
  double m = 1.0;
  std::uint64_t seed = 0;
  std::string out_path;
};

int run_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const EnvKind env = env_from_name(a.env);
  if (a.m > static_cast<double>(a.n_correct)) {
    err << "--m (" << a.m << ") exceeds --correct (" << a.n_correct
        << "), so even the clean row cannot satisfy the trust budget\n";
    return 2;
  }

  std::vector<SweepRow> rows;
  try {
    rows = robustness_sweep(env, a.n_correct, a.n_adversarial, split_csv_list(a.algs), a.m,
                            a.seed);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }

  std::ofstream csv(a.out_path, std::ios::trunc);
  if (!csv) {
    err << "cannot open '" << a.out_path << "' for writing\n";
    return 1;
  }
  write_sweep_csv(csv, rows);
  if (!csv) {
    err << "write failed for '" << a.out_path << "'\n";
    return 1;
  }

  bool all_failed = true;
  for (const SweepRow& r : rows) {
    if (!r.error) all_failed = false;
    if (r.alg != "rment") continue;
    ordered_json line;
    line["alg"] = r.alg;
    line["task"] = r.task;
    line["n_correct"] = r.n_correct;
    line["n_adversarial"] = r.n_adversarial;
    line["m"] = r.m;
    line["seed"] = r.seed;
    if (r.error) {
      line["error"] = r.error_msg;
    } else {
      line["weights"] = r.weights;
      line["converged"] = r.converged;
    }
    out << line.dump() << "\n";
  }
  for (const SweepRow& r : rows)
    if (r.error) err << r.alg << " row at n_adversarial=" << r.n_adversarial << " failed: "
                     << r.error_msg << "\n";
  return all_failed ? 1 : 0;
}

}  // namespace

int cli_main(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"max-ent behavior cloning with per-demo trust weights"};
  app.name("rment");
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-demos", "generate demonstrations into a JSONL file");
  gen_cmd->add_option("--env", gen.env, "task: gridworld or mountaincar")
      ->check(CLI::IsMember({"gridworld", "mountaincar"}));
  gen_cmd->add_option("--kind", gen.kind, "demo kind: correct, adversarial, or random")
      ->check(CLI::IsMember({"correct", "adversarial", "random"}));
  gen_cmd->add_option("--n", gen.n, "number of demos; demo i uses seed+i")
      ->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed, "base seed");
  gen_cmd->add_option("--out", gen.out_path, "output JSONL path")->required();

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit trust weights and a policy from demos");
  fit_cmd->add_option("--demos", fit.demo_files, "demo JSONL file(s)")->required();
  fit_cmd->add_option("--env", fit.env, "task the demos belong to")
      ->check(CLI::IsMember({"gridworld", "mountaincar"}));
  fit_cmd->add_option("--features", fit.features, "feature map: auto, tabular, or tiled")
      ->check(CLI::IsMember({"auto", "tabular", "tiled"}));
  fit_cmd->add_option("--m", fit.m, "trust budget: weights sum to this")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--tol", fit.tol, "inner gradient tolerance")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--max-outer", fit.max_outer, "outer iteration cap")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--out", fit.out_path, "output model JSON path")->required();

  EvalArgs ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a fitted model");
  eval_cmd->add_option("--model", ev.model_path, "model JSON path")->required();
  eval_cmd->add_option("--metric", ev.metric, "accuracy (gridworld only) or return")
      ->check(CLI::IsMember({"accuracy", "return"}));
  eval_cmd->add_option("--episodes", ev.episodes, "episodes for the return metric")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", ev.seed, "evaluation seed");

  SweepArgs sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "fit and evaluate across adversarial demo counts");
  sweep_cmd->add_option("--env", sweep.env, "task")
      ->check(CLI::IsMember({"gridworld", "mountaincar"}));
  sweep_cmd->add_option("--correct", sweep.n_correct, "number of correct demos")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--adversarial", sweep.n_adversarial, "max adversarial count (rows 0..N)")
      ->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--algs", sweep.algs, "comma-separated: rment,bc");
  sweep_cmd->add_option("--m", sweep.m, "trust budget for rment fits")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sweep.seed, "base seed for demos and evaluation");
  sweep_cmd->add_option("--out", sweep.out_path, "output CSV path")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gen_cmd->parsed()) return run_gen_demos(gen, out, err);
    if (fit_cmd->parsed()) return run_fit(fit, out, err);
    if (eval_cmd->parsed()) return run_eval(ev, out, err);
    if (sweep_cmd->parsed()) return run_sweep(sweep, out, err);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  err << "no subcommand given\n";
  return 2;
}

}  // namespace rment

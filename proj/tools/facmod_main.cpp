#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "facmod/errors.hpp"
#include "facmod/experiments.hpp"

namespace {

using facmod::ExperimentConfig;

// Flag values are funneled into one flat JSON document and merged over the
// config file, so flags and file share a single schema.
struct Overrides {
  nlohmann::json doc = nlohmann::json::object();
  std::string config_path;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    add<std::string>(cmd, "--distance", "distance",
                     "frobenius | kl | gelbrich");
    add<double>(cmd, "--epsilon", "epsilon", "ball radius");
    add_vec<double>(cmd, "--epsilon-grid", "epsilon_grid",
                    "sweep/timing radii");
    add<int>(cmd, "--n", "n", "ambient dimension");
    add<int>(cmd, "--r", "r", "true factor rank");
    add<int>(cmd, "--num-samples", "num_samples", "sample count (-1: 15n)");
    add<std::uint64_t>(cmd, "--seed", "seed", "ground-truth seed");
    add<std::uint64_t>(cmd, "--sample-seed", "sample_seed",
                       "base sampling seed");
    add<int>(cmd, "--n-exp", "n_exp", "sweep repetitions");
    add_vec<int>(cmd, "--n-grid", "n_grid", "timing dimensions");
    add<std::string>(cmd, "--centering", "centering", "sample_mean | zero");
    add<std::string>(cmd, "--stepsize", "stepsize", "constant | diminishing");
    add<double>(cmd, "--stepsize-c", "stepsize_c", "stepsize scale c");
    add<int>(cmd, "--max-iters", "max_iters", "iteration budget");
    add<double>(cmd, "--rel-tol", "rel_tol", "stopping threshold (0: off)");
    add<double>(cmd, "--dykstra-tol", "dykstra_tol", "projection tolerance");
    add<int>(cmd, "--dykstra-max-iters", "dykstra_max_iters",
             "projection sweep cap");
    add<int>(cmd, "--avg-eval-stride", "avg_eval_stride",
             "averaged-objective checkpoint spacing");
    add<int>(cmd, "--threads", "threads", "sweep worker threads");
    add<std::string>(cmd, "--out", "out", "output directory");
    add<std::string>(cmd, "--input", "input", "samples or covariance CSV");
  }

  ExperimentConfig build(const std::string& mode) const {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = facmod::load_config(config_path);
    facmod::apply_config_json(cfg, doc.dump());
    cfg.mode = mode;
    return cfg;
  }

 private:
  template <typename T>
  void add(CLI::App* cmd, const std::string& flag, std::string key,
           const std::string& help) {
    cmd->add_option_function<T>(
        flag, [this, key = std::move(key)](const T& v) { doc[key] = v; }, help);
  }

  template <typename T>
  void add_vec(CLI::App* cmd, const std::string& flag, std::string key,
               const std::string& help) {
    cmd->add_option_function<std::vector<T>>(
         flag, [this, key = std::move(key)](const std::vector<T>& v) { doc[key] = v; },
         help)
        ->delimiter(',');
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank plus diagonal covariance estimation over matrix balls"};
  app.require_subcommand(1);

  Overrides ov;
  CLI::App* converge =
      app.add_subcommand("converge", "fixed-budget convergence trace");
  CLI::App* sweep = app.add_subcommand("sweep", "epsilon sweep statistics");
  CLI::App* timing = app.add_subcommand("timing", "wall-clock benchmark");
  CLI::App* solve = app.add_subcommand("solve", "solve one covariance or sample file");
  for (CLI::App* cmd : {converge, sweep, timing, solve}) ov.add_flags(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (converge->parsed()) {
      facmod::run_convergence(ov.build("convergence"));
    } else if (sweep->parsed()) {
      facmod::run_sweep(ov.build("sweep"));
    } else if (timing->parsed()) {
      facmod::run_timing(ov.build("timing"));
    } else {
      facmod::run_solve_file(ov.build("solve"));
    }
  } catch (const facmod::InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const facmod::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

#include "facmod/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "facmod/errors.hpp"
#include "facmod/matrix_io.hpp"

namespace facmod {

namespace {

using nlohmann::json;

Centering centering_from_name(const std::string& name) {
  if (name == "sample_mean") return Centering::SampleMean;
  if (name == "zero") return Centering::Zero;
  throw InputError("config: centering must be 'sample_mean' or 'zero'");
}

Stepsize stepsize_from_name(const std::string& name) {
  if (name == "constant") return Stepsize::Constant;
  if (name == "diminishing") return Stepsize::Diminishing;
  throw InputError("config: stepsize must be 'constant' or 'diminishing'");
}

void apply_json(ExperimentConfig& cfg, const json& doc) {
  if (!doc.is_object()) throw InputError("config: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "mode") {
        cfg.mode = value.get<std::string>();
      } else if (key == "distance") {
        cfg.distance = distance_from_name(value.get<std::string>());
      } else if (key == "epsilon") {
        cfg.epsilon = value.get<double>();
      } else if (key == "epsilon_grid") {
        cfg.epsilon_grid = value.get<std::vector<double>>();
      } else if (key == "n") {
        cfg.n = value.get<int>();
      } else if (key == "r") {
        cfg.r = value.get<int>();
      } else if (key == "num_samples") {
        cfg.num_samples = value.get<int>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "sample_seed") {
        cfg.sample_seed = value.get<std::uint64_t>();
      } else if (key == "n_exp") {
        cfg.n_exp = value.get<int>();
      } else if (key == "n_grid") {
        cfg.n_grid = value.get<std::vector<int>>();
      } else if (key == "centering") {
        cfg.centering = centering_from_name(value.get<std::string>());
      } else if (key == "stepsize") {
        cfg.solver.stepsize = stepsize_from_name(value.get<std::string>());
      } else if (key == "stepsize_c") {
        cfg.solver.stepsize_c = value.get<double>();
      } else if (key == "max_iters") {
        cfg.solver.max_iters = value.get<int>();
      } else if (key == "rel_tol") {
        cfg.solver.rel_tol = value.get<double>();
      } else if (key == "dykstra_tol") {
        cfg.solver.dykstra_tol = value.get<double>();
      } else if (key == "dykstra_max_iters") {
        cfg.solver.dykstra_max_iters = value.get<int>();
      } else if (key == "avg_eval_stride") {
        cfg.solver.avg_eval_stride = value.get<int>();
      } else if (key == "threads") {
        cfg.threads = value.get<int>();
      } else if (key == "out") {
        cfg.out_dir = value.get<std::string>();
      } else if (key == "input") {
        cfg.input_file = value.get<std::string>();
      } else {
        throw InputError("config: unknown key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw InputError("config: bad value for '" + key + "': " + e.what());
    }
  }
}

int effective_samples(const ExperimentConfig& cfg, int n) {
  if (cfg.num_samples > 0) return cfg.num_samples;
  return 15 * n;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw InputError(path.string() + ": cannot open for writing");
  return f;
}

std::filesystem::path prepare_out_dir(const ExperimentConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec && !std::filesystem::is_directory(dir))
    throw InputError(dir.string() + ": cannot create output directory");
  return dir;
}

void write_solution_json(const std::filesystem::path& path, Distance kind,
                         double epsilon, const FactorModelSolution& sol,
                         const SolverTrace& trace) {
  json doc;
  doc["distance"] = distance_name(kind);
  doc["epsilon"] = epsilon;
  doc["objective"] = sol.objective;
  doc["iterations"] = static_cast<int>(trace.records.size());
  doc["status"] =
      trace.status == SolveStatus::Converged ? "converged" : "max_iters";
  doc["recovery_residual"] = sol.recovery_residual;
  doc["bound_gap"] = sol.bound_gap;
  auto f = open_out(path);
  f << doc.dump(2) << "\n";
}

// Runs fn(i) for i in [0, total) on cfg.threads workers; each index writes
// only its own output slot, so the aggregate is order-deterministic.
template <typename Fn>
void parallel_for(int threads, size_t total, const Fn& fn) {
  const int workers = std::max(1, threads);
  if (workers == 1 || total <= 1) {
    for (size_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < total;) fn(i);
  };
  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(
      std::min<size_t>(static_cast<size_t>(workers), total));
  pool.reserve(static_cast<size_t>(spawn));
  for (int w = 0; w < spawn; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<double> default_epsilon_grid() {
  std::vector<double> grid;
  grid.reserve(11);
  const double root10 = std::sqrt(10.0);
  double v = 0.01;
  for (int i = 0; i <= 10; ++i) {
    grid.push_back(v);
    v *= root10;
  }
  return grid;
}

ExperimentConfig parse_config_json(const std::string& text) {
  ExperimentConfig cfg;
  apply_config_json(cfg, text);
  return cfg;
}

void apply_config_json(ExperimentConfig& cfg, const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw InputError("config: invalid JSON");
  apply_json(cfg, doc);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError(path + ": cannot open config file");
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  try {
    return parse_config_json(text);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw InputError("percentile: empty sample");
  if (p < 0.0 || p > 100.0) throw InputError("percentile: p outside [0,100]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p / 100.0;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = static_cast<size_t>(std::ceil(h));
  const double w = h - static_cast<double>(lo);
  return values[lo] * (1.0 - w) + values[hi] * w;
}

void run_convergence(const ExperimentConfig& cfg) {
  const auto dir = prepare_out_dir(cfg);
  GroundTruth gt = gen_ground_truth(cfg.n, cfg.r, cfg.seed);
  SampleSet samples =
      gen_samples(gt, effective_samples(cfg, cfg.n), cfg.sample_seed);
  SymmetricMatrix hat = empirical_covariance(samples, cfg.centering);
  AmbiguityBall ball(hat, cfg.epsilon, cfg.distance);

  SolverConfig scfg = cfg.solver;
  scfg.rel_tol = 0.0;  // fixed-budget run: the full curve is the product
  auto [sol, trace] = solve(ball, scfg);

  const double reference = trace.records.back().objective;
  ErrorCurve curve = convergence_error(trace, reference);

  auto f = open_out(dir / "trace.csv");
  f << "iter,objective,avg_objective,conv_error,dykstra_iters,time_ms\n";
  for (size_t i = 0; i < trace.records.size(); ++i) {
    const IterationRecord& rec = trace.records[i];
    f << rec.t << "," << format_double(rec.objective) << ",";
    if (rec.has_avg_objective) f << format_double(rec.avg_objective);
    f << "," << format_double(curve.values[i]) << "," << rec.dykstra_iterations
      << "," << format_double(rec.elapsed_sec * 1000.0) << "\n";
  }
  f.close();

  write_solution_json(dir / "solution.json", cfg.distance, cfg.epsilon, sol,
                      trace);
}

SweepReport run_sweep(const ExperimentConfig& cfg) {
  if (cfg.n_exp < 1) throw InputError("sweep: n_exp must be >= 1");
  const auto dir = prepare_out_dir(cfg);
  const std::vector<double> grid =
      cfg.epsilon_grid.empty() ? default_epsilon_grid() : cfg.epsilon_grid;
  if (grid.empty()) throw InputError("sweep: epsilon grid is empty");

  GroundTruth gt = gen_ground_truth(cfg.n, cfg.r, cfg.seed);
  const int num_samples = effective_samples(cfg, cfg.n);

  std::vector<SymmetricMatrix> hats(static_cast<size_t>(cfg.n_exp));
  std::vector<double> base_err(static_cast<size_t>(cfg.n_exp));
  for (int e = 0; e < cfg.n_exp; ++e) {
    SampleSet samples =
        gen_samples(gt, num_samples, cfg.sample_seed + static_cast<std::uint64_t>(e));
    hats[static_cast<size_t>(e)] = empirical_covariance(samples, cfg.centering);
    base_err[static_cast<size_t>(e)] =
        dist(cfg.distance, hats[static_cast<size_t>(e)], gt.sigma_true);
  }

  const size_t total = static_cast<size_t>(cfg.n_exp) * grid.size();
  std::vector<double> err(total, std::numeric_limits<double>::quiet_NaN());
  parallel_for(cfg.threads, total, [&](size_t idx) {
    const size_t e = idx / grid.size();
    const size_t g = idx % grid.size();
    try {
      AmbiguityBall ball(hats[e], grid[g], cfg.distance);
      auto [sol, trace] = solve(ball, cfg.solver);
      const double denom = base_err[e];
      err[idx] = denom > 0.0 ? dist(cfg.distance, sol.Sigma, gt.sigma_true) / denom
                             : std::numeric_limits<double>::infinity();
    } catch (const SolverError&) {
      // left NaN: recorded as a failed run, excluded from the statistics
    }
  });

  SweepReport report;
  report.rows.reserve(grid.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> col;
    col.reserve(static_cast<size_t>(cfg.n_exp));
    int improved = 0;
    for (size_t e = 0; e < static_cast<size_t>(cfg.n_exp); ++e) {
      const double v = err[e * grid.size() + g];
      if (std::isnan(v)) continue;
      col.push_back(v);
      if (v < 1.0) ++improved;
    }
    SweepRow row;
    row.epsilon = grid[g];
    if (col.empty()) {
      row.mean_err = row.p5_err = row.p95_err =
          std::numeric_limits<double>::quiet_NaN();
    } else {
      double sum = 0.0;
      for (double v : col) sum += v;
      row.mean_err = sum / static_cast<double>(col.size());
      row.p5_err = percentile(col, 5.0);
      row.p95_err = percentile(col, 95.0);
      row.improved_frac = static_cast<double>(improved) /
                          static_cast<double>(col.size());
    }
    report.rows.push_back(row);
  }

  auto f = open_out(dir / "sweep.csv");
  f << "epsilon,mean_err,p5_err,p95_err,improved_frac\n";
  for (const SweepRow& row : report.rows) {
    f << format_double(row.epsilon) << "," << format_double(row.mean_err) << ","
      << format_double(row.p5_err) << "," << format_double(row.p95_err) << ","
      << format_double(row.improved_frac) << "\n";
  }
  return report;
}

void run_timing(const ExperimentConfig& cfg) {
  const auto dir = prepare_out_dir(cfg);
  const std::vector<int> n_grid =
      cfg.n_grid.empty() ? std::vector<int>{10, 20, 50} : cfg.n_grid;
  const std::vector<double> eps_grid = cfg.epsilon_grid.empty()
                                           ? std::vector<double>{0.1, 1.0, 10.0}
                                           : cfg.epsilon_grid;

  auto f = open_out(dir / "timing.csv");
  f << "n,epsilon,distance,iters,seconds,status\n";
  for (int n : n_grid) {
    GroundTruth gt = gen_ground_truth(n, cfg.r, cfg.seed);
    SampleSet samples = gen_samples(gt, effective_samples(cfg, n), cfg.sample_seed);
    SymmetricMatrix hat = empirical_covariance(samples, cfg.centering);
    for (Distance kind :
         {Distance::Frobenius, Distance::KL, Distance::Gelbrich}) {
      for (double eps : eps_grid) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string status;
        int iters = 0;
        try {
          AmbiguityBall ball(hat, eps, kind);
          auto [sol, trace] = solve(ball, cfg.solver);
          iters = static_cast<int>(trace.records.size());
          status = trace.status == SolveStatus::Converged ? "converged"
                                                          : "max_iters";
        } catch (const SolverError&) {
          status = "error";
        }
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        f << n << "," << format_double(eps) << "," << distance_name(kind) << ","
          << iters << "," << format_double(secs) << "," << status << "\n";
      }
    }
  }
}

void run_solve_file(const ExperimentConfig& cfg) {
  if (cfg.input_file.empty())
    throw InputError("solve mode requires an input file");
  const auto dir = prepare_out_dir(cfg);
  MatrixFile mf = read_matrix_file(cfg.input_file);
  SymmetricMatrix hat = mf.is_samples
                            ? empirical_covariance(mf.samples, cfg.centering)
                            : mf.covariance;
  AmbiguityBall ball(hat, cfg.epsilon, cfg.distance);
  auto [sol, trace] = solve(ball, cfg.solver);

  write_solution_json(dir / "solution.json", cfg.distance, cfg.epsilon, sol,
                      trace);
  write_matrix_csv((dir / "L.csv").string(), sol.L);
  write_matrix_csv((dir / "D.csv").string(), sol.D);
  write_matrix_csv((dir / "Sigma.csv").string(), sol.Sigma);
}

}  // namespace facmod

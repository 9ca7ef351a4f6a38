#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "facmod/datagen.hpp"
#include "facmod/distances.hpp"
#include "facmod/solver.hpp"

namespace facmod {

// 0.01 * sqrt(10)^i for i = 0..10.
std::vector<double> default_epsilon_grid();

struct ExperimentConfig {
  std::string mode = "convergence";  // convergence | sweep | timing | solve
  Distance distance = Distance::Frobenius;
  double epsilon = 1.0;
  std::vector<double> epsilon_grid;  // sweep/timing; empty -> mode default
  int n = 20;
  int r = 4;
  int num_samples = -1;  // -1 -> 15 n
  std::uint64_t seed = 1;         // ground-truth stream
  std::uint64_t sample_seed = 2;  // base of the per-experiment sample streams
  int n_exp = 100;
  std::vector<int> n_grid;  // timing; empty -> {10, 20, 50}
  Centering centering = Centering::SampleMean;
  SolverConfig solver;
  int threads = 1;
  std::string out_dir = ".";
  std::string input_file;  // solve mode
};

// Strict flat-JSON config: unknown keys or wrong types raise InputError.
ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// Merges a flat-JSON document over cfg; the CLI funnels flag overrides here.
void apply_config_json(ExperimentConfig& cfg, const std::string& text);

struct SweepRow {
  double epsilon = 0.0;
  double mean_err = 0.0;
  double p5_err = 0.0;
  double p95_err = 0.0;
  double improved_frac = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // grid order
};

// Fixed-budget run without the stopping rule; writes trace.csv (iter,
// objective, avg_objective, conv_error, dykstra_iters, time_ms) and
// solution.json to out_dir.
void run_convergence(const ExperimentConfig& cfg);

// One ground truth, fresh samples per experiment, every epsilon in the grid;
// writes sweep.csv (epsilon, mean_err, p5_err, p95_err, improved_frac).
SweepReport run_sweep(const ExperimentConfig& cfg);

// Wall-clock of converged solves over n-grid x epsilon-grid x all three
// distances; writes timing.csv (n, epsilon, distance, iters, seconds,
// status).
void run_timing(const ExperimentConfig& cfg);

// Solves a user covariance or sample file; writes solution.json plus L.csv,
// D.csv, Sigma.csv.
void run_solve_file(const ExperimentConfig& cfg);

// Linear-interpolation percentile of the sorted values, p in [0, 100].
double percentile(std::vector<double> values, double p);

}  // namespace facmod

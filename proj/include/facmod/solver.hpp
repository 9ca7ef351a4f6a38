#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "facmod/distances.hpp"
#include "facmod/sym_matrix.hpp"

namespace facmod {

enum class Stepsize { Constant, Diminishing };

struct SolverConfig {
  Stepsize stepsize = Stepsize::Diminishing;
  double stepsize_c = 1.0;  // delta_t = c (constant) or c/sqrt(t) (diminishing)
  int max_iters = 10000;
  double rel_tol = 1e-6;  // early-stop threshold on relative change; 0 disables
  double dykstra_tol = 1e-6;
  int dykstra_max_iters = 10000;
  int avg_eval_stride = 10;  // averaged-objective checkpoint spacing
};

enum class SolveStatus { Converged, MaxIters };

struct IterationRecord {
  int t = 0;
  double objective = 0.0;      // <Lambda_t, Sigma_t>
  double avg_objective = 0.0;  // <Lambda_bar_t, Sigma_bar_t>, checkpoints only
  bool has_avg_objective = false;
  double rel_change = 0.0;  // +inf at t = 1
  int dykstra_iterations = 0;
  double elapsed_sec = 0.0;
};

struct SolverTrace {
  std::vector<IterationRecord> records;
  SolveStatus status = SolveStatus::MaxIters;
  // ||Lambda_1 - Lambda_T||_F, the default radius proxy for the gap bound.
  double lambda_travel = 0.0;
};

// On MaxIters the reported pair is the ergodic average, which carries the
// O(1/sqrt(T)) gap guarantee. On Converged the stopping rule has certified a
// fixed point of the projected ascent, so the solver keeps whichever of the
// averaged and last dual iterates scores the higher (always feasible) value.
struct FactorModelSolution {
  SymmetricMatrix Sigma;   // oracle minimizer at the reported dual iterate
  SymmetricMatrix Lambda;  // reported dual iterate
  SymmetricMatrix L;
  SymmetricMatrix D;  // diagonal
  double objective = 0.0;
  double recovery_residual = 0.0;
  double bound_gap = 0.0;
  bool bound_heuristic = false;
};

struct Recovery {
  SymmetricMatrix L;
  SymmetricMatrix D;
  double residual = 0.0;
};

struct BoundInfo {
  double value = 0.0;
  // True when the stepsize was diminishing or the radius was the travel proxy.
  bool heuristic = false;
};

struct ErrorCurve {
  std::vector<double> values;  // one entry per trace record
  bool absolute = false;       // reference was ~0, absolute errors reported
};

// Projected dual ascent with averaging: Sigma_t = O(Lambda_t),
// Lambda_{t+1} = Pi[Lambda_t + delta_t Sigma_t], running average of Lambda.
// Stops when the relative objective change drops below rel_tol (absolute
// change once |objective| < 1e-12) or at max_iters.  lambda1 defaults to 0.
std::pair<FactorModelSolution, SolverTrace> solve(
    const AmbiguityBall& ball, const SolverConfig& config = {},
    std::optional<SymmetricMatrix> lambda1 = std::nullopt);

// R^2/(2 delta T) + (delta/2) Lip^2 with Lip = lipschitz_bound(ball).value.
// radius defaults to trace.lambda_travel (flagged heuristic); diminishing
// stepsize evaluates with delta = c/sqrt(T) (also flagged).
BoundInfo suboptimality_bound(const SolverTrace& trace, const AmbiguityBall& ball,
                              const SolverConfig& config,
                              std::optional<double> radius = std::nullopt);

// Split Sigma into low-rank L plus nonnegative diagonal D.  Stage 1 seeds L
// from Sigma compressed onto Lambda's eigenvalue-1 eigenspace; stage 2
// alternates exact partial minimizations of ||Sigma - L - D||_F.
Recovery recover_decomposition(const SymmetricMatrix& sigma_bar,
                               const SymmetricMatrix& lambda_bar);

// Per-iteration |objective_t - ref| / |ref| (absolute and flagged when
// |ref| < 1e-12).
ErrorCurve convergence_error(const SolverTrace& trace, double reference_objective);

}  // namespace facmod

#include "facmod/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "facmod/errors.hpp"
#include "facmod/oracles.hpp"
#include "facmod/projection.hpp"
#include "facmod/spectral.hpp"

namespace facmod {

namespace {

void validate_config(const SolverConfig& config) {
  if (!(config.stepsize_c > 0.0))
    throw InputError("solve: stepsize constant must be positive");
  if (config.max_iters < 1) throw InputError("solve: max_iters must be >= 1");
  if (config.rel_tol < 0.0) throw InputError("solve: rel_tol must be >= 0");
  if (!(config.dykstra_tol > 0.0))
    throw InputError("solve: dykstra_tol must be positive");
  if (config.dykstra_max_iters < 1)
    throw InputError("solve: dykstra_max_iters must be >= 1");
  if (config.avg_eval_stride < 1)
    throw InputError("solve: avg_eval_stride must be >= 1");
}

void validate_start(const SymmetricMatrix& lam, int n, double tol) {
  if (lam.dim() != n)
    throw InputError("solve: starting point dimension mismatch");
  const double slack = tol * std::max(1.0, lam.frobenius_norm());
  for (int i = 0; i < n; ++i) {
    if (lam(i, i) > slack)
      throw InputError("solve: starting point violates diag <= 0");
  }
  if (lambda_max(lam) > 1.0 + slack)
    throw InputError("solve: starting point violates Lambda <= I");
}

SymmetricMatrix clamp_diag_nonneg(const SymmetricMatrix& residual) {
  const int n = residual.dim();
  SymmetricMatrix d(n);
  for (int i = 0; i < n; ++i) d.set(i, i, std::max(0.0, residual(i, i)));
  return d;
}

}  // namespace

std::pair<FactorModelSolution, SolverTrace> solve(
    const AmbiguityBall& ball, const SolverConfig& config,
    std::optional<SymmetricMatrix> lambda1) {
  validate_config(config);
  const int n = ball.center().dim();
  SymmetricMatrix lam = lambda1 ? std::move(*lambda1) : SymmetricMatrix(n);
  validate_start(lam, n, config.dykstra_tol);
  const SymmetricMatrix lam_init = lam;

  SymmetricMatrix lam_bar = lam;
  SolverTrace trace;
  trace.records.reserve(static_cast<size_t>(std::min(config.max_iters, 200000)));

  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&t_start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t_start)
        .count();
  };

  double prev_obj = 0.0;
  for (int t = 1; t <= config.max_iters; ++t) {
    OracleOutput step;
    try {
      step = lmo(lam, ball);
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " (solver iteration " +
                        std::to_string(t) + ")");
    }
    const double obj = step.dual_value;

    if (t > 1) {
      const double w = 1.0 / t;
      lam_bar *= 1.0 - w;
      lam_bar += w * lam;
    }

    IterationRecord rec;
    rec.t = t;
    rec.objective = obj;
    if (t == 1) {
      rec.rel_change = std::numeric_limits<double>::infinity();
    } else {
      const double diff = std::abs(obj - prev_obj);
      // Absolute change once the objective itself is numerically zero.
      rec.rel_change = std::abs(obj) < 1e-12 ? diff : diff / std::abs(obj);
    }
    prev_obj = obj;

    const bool stop = t >= 2 && config.rel_tol > 0.0 && rec.rel_change < config.rel_tol;
    const bool last = stop || t == config.max_iters;

    if (!last && t % config.avg_eval_stride == 0) {
      rec.avg_objective = lmo(lam_bar, ball).dual_value;
      rec.has_avg_objective = true;
    }

    if (!last) {
      DykstraResult proj =
          dykstra_project(lam + config.stepsize_c *
                                    (config.stepsize == Stepsize::Constant
                                         ? 1.0
                                         : 1.0 / std::sqrt(static_cast<double>(t))) *
                                    step.minimizer,
                          config.dykstra_max_iters, config.dykstra_tol);
      lam = std::move(proj.value);
      rec.dykstra_iterations = proj.iterations;
    }

    rec.elapsed_sec = elapsed();
    trace.records.push_back(rec);
    if (stop) {
      trace.status = SolveStatus::Converged;
      break;
    }
  }
  trace.lambda_travel = (lam - lam_init).frobenius_norm();

  OracleOutput chosen = lmo(lam_bar, ball);
  trace.records.back().avg_objective = chosen.dual_value;
  trace.records.back().has_avg_objective = true;

  FactorModelSolution sol;
  sol.Lambda = lam_bar;
  if (trace.status == SolveStatus::Converged) {
    // The stopping rule certifies the last iterate stopped moving, i.e. it
    // sits at a fixed point of the projected ascent map, where it is optimal.
    // The running average may still lag behind it on short runs; both points
    // are dual feasible, so returning the larger oracle value is always safe.
    OracleOutput last = lmo(lam, ball);
    if (last.dual_value > chosen.dual_value) {
      chosen = std::move(last);
      sol.Lambda = lam;
    }
  }
  sol.Sigma = std::move(chosen.minimizer);
  sol.objective = chosen.dual_value;

  Recovery rec = recover_decomposition(sol.Sigma, sol.Lambda);
  sol.L = std::move(rec.L);
  sol.D = std::move(rec.D);
  sol.recovery_residual = rec.residual;

  const BoundInfo bound = suboptimality_bound(trace, ball, config);
  sol.bound_gap = bound.value;
  sol.bound_heuristic = bound.heuristic;
  return {std::move(sol), std::move(trace)};
}

BoundInfo suboptimality_bound(const SolverTrace& trace, const AmbiguityBall& ball,
                              const SolverConfig& config,
                              std::optional<double> radius) {
  if (trace.records.empty())
    throw InputError("suboptimality_bound: empty trace");
  if (!(config.stepsize_c > 0.0))
    throw InputError("suboptimality_bound: stepsize constant must be positive");
  const double iters = static_cast<double>(trace.records.size());

  BoundInfo out;
  double delta = config.stepsize_c;
  if (config.stepsize == Stepsize::Diminishing) {
    delta /= std::sqrt(iters);
    out.heuristic = true;
  }
  double r = 0.0;
  if (radius) {
    r = *radius;
    if (!(r >= 0.0)) throw InputError("suboptimality_bound: radius must be >= 0");
  } else {
    r = trace.lambda_travel;
    out.heuristic = true;
  }
  const double lip = lipschitz_bound(ball).value;
  out.value = r * r / (2.0 * delta * iters) + 0.5 * delta * lip * lip;
  return out;
}

Recovery recover_decomposition(const SymmetricMatrix& sigma_bar,
                               const SymmetricMatrix& lambda_bar) {
  const int n = sigma_bar.dim();
  if (lambda_bar.dim() != n)
    throw InputError("recover_decomposition: dimension mismatch");
  {
    SpectralDecomposition sdec = eig_sym(sigma_bar);
    if (sdec.values.back() < -tol_pd(std::abs(sdec.values.front())))
      throw InputError("recover_decomposition: Sigma must be PSD");
  }

  // Stage 1: seed L from Sigma compressed onto the eigenvalue-1 eigenspace of
  // Lambda (the only place a tight dual allows low-rank mass).
  constexpr double kTolCs = 1e-6;
  SpectralDecomposition ldec = eig_sym(lambda_bar);
  std::vector<double> indicator(static_cast<size_t>(n), 0.0);
  bool any = false;
  for (int i = 0; i < n; ++i) {
    if (std::abs(ldec.values[static_cast<size_t>(i)] - 1.0) <= kTolCs) {
      indicator[static_cast<size_t>(i)] = 1.0;
      any = true;
    }
  }
  SymmetricMatrix L(n);
  if (any) {
    SymmetricMatrix projector = assemble(ldec, indicator);
    std::vector<double> p_buf(projector.data(),
                              projector.data() + static_cast<size_t>(n) * n);
    L = psd_project(congruence(n, p_buf, sigma_bar));
  }
  SymmetricMatrix D = clamp_diag_nonneg(sigma_bar - L);

  auto residual_of = [&](const SymmetricMatrix& l, const SymmetricMatrix& d) {
    return (sigma_bar - l - d).frobenius_norm();
  };

  Recovery best{L, D, residual_of(L, D)};
  double best_trace = L.trace();

  // Stage 2: alternate the two exact partial minimizers of the residual.
  double prev_res = best.residual;
  for (int round = 0; round < 500; ++round) {
    L = psd_project(sigma_bar - D);
    D = clamp_diag_nonneg(sigma_bar - L);
    const double res = residual_of(L, D);
    const double tr = L.trace();
    const double tie = 1e-12 * std::max(1.0, best.residual);
    if (res < best.residual - tie ||
        (res <= best.residual + tie && tr < best_trace)) {
      best.L = L;
      best.D = D;
      best.residual = res;
      best_trace = tr;
    }
    if (std::abs(prev_res - res) <= 1e-15 * std::max(1.0, prev_res)) break;
    prev_res = res;
  }
  return best;
}

ErrorCurve convergence_error(const SolverTrace& trace,
                             double reference_objective) {
  ErrorCurve out;
  out.absolute = std::abs(reference_objective) < 1e-12;
  out.values.reserve(trace.records.size());
  for (const IterationRecord& rec : trace.records) {
    const double diff = std::abs(rec.objective - reference_objective);
    out.values.push_back(out.absolute ? diff
                                      : diff / std::abs(reference_objective));
  }
  return out;
}

}  // namespace facmod

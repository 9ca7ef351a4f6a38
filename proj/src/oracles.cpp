#include "facmod/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "facmod/errors.hpp"
#include "facmod/scalar_search.hpp"
#include "facmod/spectral.hpp"

namespace facmod {
namespace {

std::string bracket_msg(const char* what, double lo, double hi) {
  char buf[192];
  std::snprintf(buf, sizeof buf, "%s: gamma bracket failed (lo=%.17g, hi=%.17g)", what, lo, hi);
  return std::string(buf);
}

bool is_degenerate(const SymmetricMatrix& lambda, const AmbiguityBall& ball) {
  return ball.radius() == 0.0 || lambda.frobenius_norm() <= kTolZero;
}

// Any ball point minimizes <0, Sigma>; the center is the canonical pick and
// keeps the gamma brackets (which collapse to 0) well defined.
OracleOutput degenerate_output(const SymmetricMatrix& lambda, const AmbiguityBall& ball) {
  OracleOutput out;
  out.minimizer = ball.center();
  out.dual_value = inner(lambda, ball.center());
  return out;
}

struct EdgeSearch {
  double gamma = 0.0;
  double hi_used = 0.0;
  int iters = 0;
};

// Maximizer of a concave scalar dual from its nonincreasing derivative f on
// (lo_eff, hi]: left edge when f(lo_eff) <= 0 (constraint inactive), right
// edge when f stays nonnegative, otherwise the bisected sign change.  The
// bracket bound is proven, so f(hi) > edge_tol expands hi once by 10x as a
// round-off safeguard and throws past that.
EdgeSearch maximize_concave_scalar(const std::function<double(double)>& f, double lo_eff,
                                   double hi, double edge_tol, double rel_tol, double f_tol,
                                   int max_iters, const char* what) {
  EdgeSearch out;
  out.hi_used = hi;
  double f_lo = f(lo_eff);
  ++out.iters;
  if (f_lo <= 0.0) {
    out.gamma = lo_eff;
    return out;
  }
  double f_hi = f(hi);
  ++out.iters;
  if (f_hi > edge_tol) {
    out.hi_used = 10.0 * hi;
    f_hi = f(out.hi_used);
    ++out.iters;
    if (f_hi > edge_tol) throw SolverError(bracket_msg(what, lo_eff, out.hi_used));
  }
  if (f_hi >= 0.0) {
    out.gamma = out.hi_used;
    return out;
  }
  ScalarSearchResult r = bisect_nonincreasing(f, lo_eff, out.hi_used, rel_tol, f_tol, max_iters);
  out.gamma = r.x;
  out.iters += r.iters;
  return out;
}

}  // namespace

OracleOutput lmo_frobenius(const SymmetricMatrix& lambda, const AmbiguityBall& ball) {
  if (ball.kind() != Distance::Frobenius) throw InputError("lmo_frobenius: ball kind mismatch");
  if (is_degenerate(lambda, ball)) return degenerate_output(lambda, ball);

  const SymmetricMatrix& hat = ball.center();
  const double eps = ball.radius();
  const double lam_norm = lambda.frobenius_norm();

  // Multiplier bound from the Slater point Sigma = hat of the squared
  // constraint: gamma* <= (<Lambda,hat> - d) / eps^2 <= ||Lambda||_F / eps.
  const double hi = lam_norm / eps;
  const double lo_eff = 1e-14 * hi;

  auto minimizer_at = [&](double gamma) {
    return psd_project(hat - (0.5 / gamma) * lambda);
  };
  // Derivative of the scalar dual (envelope theorem); nonincreasing.
  auto phi = [&](double gamma) {
    double r = dist_frobenius(minimizer_at(gamma), hat);
    return r * r - eps * eps;
  };

  const double edge_tol = 1e-9 * std::max(1.0, eps * eps);
  const double f_tol = 0.5 * eps * tol_feas(eps);
  EdgeSearch s =
      maximize_concave_scalar(phi, lo_eff, hi, edge_tol, 1e-10, f_tol, 120, "lmo_frobenius");

  OracleOutput out;
  out.minimizer = minimizer_at(s.gamma);
  out.multiplier = s.gamma;
  out.dual_value = inner(lambda, out.minimizer);
  out.bracket_lo = 0.0;
  out.bracket_hi = s.hi_used;
  out.scalar_solver_iters = s.iters;
  return out;
}

OracleOutput lmo_kl(const SymmetricMatrix& lambda, const AmbiguityBall& ball) {
  if (ball.kind() != Distance::KL) throw InputError("lmo_kl: ball kind mismatch");
  if (is_degenerate(lambda, ball)) return degenerate_output(lambda, ball);

  const int n = lambda.dim();
  const SymmetricMatrix& s_half = ball.center_sqrt();
  const double eps = ball.radius();

  // Whitened coordinates: with M = hat^{1/2} Lambda hat^{1/2} = Q diag(mu) Q^T,
  // the minimizer is hat^{1/2} Q diag(w) Q^T hat^{1/2}, w_i = gamma/(gamma+2mu_i).
  std::vector<double> s_buf(s_half.data(), s_half.data() + static_cast<size_t>(n) * n);
  SymmetricMatrix m = congruence(n, s_buf, lambda);
  SpectralDecomposition dec_m = eig_sym(m);
  const std::vector<double>& mu = dec_m.values;

  double nuclear = 0.0;
  for (double v : mu) nuclear += std::fabs(v);
  const double mu_min = mu.back();
  const double lo = std::max(0.0, -2.0 * mu_min);
  const double factor = (eps <= 1.0 / 24.0) ? std::sqrt(6.0 / eps) : 6.0 + 0.25 / eps;
  const double hi = nuclear * factor;

  // divergence of the candidate from the center as a function of gamma;
  // strictly decreasing, +inf at the left endpoint
  auto kl_at = [&](double gamma) {
    double acc = 0.0;
    for (double v : mu) {
      double t = 2.0 * v / gamma;
      acc += std::log1p(t) - t / (1.0 + t);
    }
    return 0.5 * acc;
  };
  auto root_fn = [&](double gamma) { return kl_at(gamma) - eps; };

  const double tol_root = 1e-8 * std::max(1.0, eps);
  double hi_used = hi;
  double f_hi = root_fn(hi);
  int iters = 1;
  if (f_hi > tol_root) {
    hi_used = 10.0 * hi;
    f_hi = root_fn(hi_used);
    ++iters;
    if (f_hi > tol_root) throw SolverError(bracket_msg("lmo_kl", lo, hi_used));
  }

  double gamma;
  if (std::fabs(f_hi) <= tol_root) {
    gamma = hi_used;
  } else {
    // spot-check the assumed monotonicity before bisecting
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 5; ++j) {
      double g = lo + j * (hi_used - lo) / 6.0;
      double v = kl_at(g);
      if (v > prev + 1e-9 * std::max(1.0, std::fabs(prev))) monotone = false;
      prev = v;
      ++iters;
    }
    if (monotone) {
      ScalarSearchResult r = bisect_nonincreasing(root_fn, lo, hi_used, 1e-15, tol_root, 400);
      gamma = r.x;
      iters += r.iters;
    } else {
      auto dual_at = [&](double g) {
        double d = 0.0;
        for (double v : mu) d += v * g / (g + 2.0 * v);
        return d + g * (kl_at(g) - eps);
      };
      ScalarSearchResult r = golden_section_max(dual_at, lo, hi_used, 1e-12, 400);
      gamma = r.x;
      iters += r.iters;
    }
  }

  std::vector<double> w(mu.size());
  for (size_t i = 0; i < mu.size(); ++i) w[i] = gamma / (gamma + 2.0 * mu[i]);
  SymmetricMatrix whitened = assemble(dec_m, w);

  OracleOutput out;
  out.minimizer = psd_project(congruence(n, s_buf, whitened));
  out.multiplier = gamma;
  out.dual_value = inner(lambda, out.minimizer);
  out.bracket_lo = lo;
  out.bracket_hi = hi_used;
  out.scalar_solver_iters = iters;
  return out;
}

OracleOutput lmo_gelbrich(const SymmetricMatrix& lambda, const AmbiguityBall& ball) {
  if (ball.kind() != Distance::Gelbrich) throw InputError("lmo_gelbrich: ball kind mismatch");
  if (is_degenerate(lambda, ball)) return degenerate_output(lambda, ball);

  const int n = lambda.dim();
  const SymmetricMatrix& hat = ball.center();
  const double eps = ball.radius();
  const double lam_norm = lambda.frobenius_norm();

  SpectralDecomposition dec_l = eig_sym(lambda);
  const std::vector<double>& theta = dec_l.values;
  SymmetricMatrix b = congruence(n, dec_l.vectors, hat, /*transposed=*/true);
  std::vector<double> s(theta.size());
  for (int i = 0; i < n; ++i) s[static_cast<size_t>(i)] = b(i, i);

  // The scalar dual -gamma eps^2 + sum_i gamma theta_i s_i / (gamma+theta_i)
  // is concave on gamma > lambda_max(-Lambda); its derivative is
  // nonincreasing there.
  auto dual_deriv = [&](double gamma) {
    double acc = -eps * eps;
    for (size_t i = 0; i < s.size(); ++i) {
      double d = gamma + theta[i];
      acc += s[i] * theta[i] * theta[i] / (d * d);
    }
    return acc;
  };

  const double lo = std::max(0.0, -theta.back());
  const double lo_eff = lo + std::max(1e-12, 1e-9 * lam_norm);
  // Slater bound of the squared constraint, via the norm comparison
  // ||Sigma - hat||_F <= Gel(Sigma, hat) (2 lambda_max^{1/2}(hat) + eps)
  // on the ball.
  const double root_lam_max = std::sqrt(std::max(0.0, ball.center_lambda_max()));
  const double hi = lam_norm * (2.0 * root_lam_max + eps) / eps;
  if (lo_eff >= hi) throw SolverError(bracket_msg("lmo_gelbrich", lo_eff, hi));

  const double edge_tol = 1e-9 * std::max(1.0, eps * eps);
  EdgeSearch res = maximize_concave_scalar(dual_deriv, lo_eff, hi, edge_tol, 1e-12, 0.0, 200,
                                           "lmo_gelbrich");

  std::vector<double> c(theta.size());
  for (size_t i = 0; i < theta.size(); ++i) c[i] = res.gamma / (res.gamma + theta[i]);
  SymmetricMatrix core(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      core.set(i, j, c[static_cast<size_t>(i)] * c[static_cast<size_t>(j)] * b(i, j));

  OracleOutput out;
  out.minimizer = psd_project(congruence(n, dec_l.vectors, core));
  out.multiplier = res.gamma;
  out.dual_value = inner(lambda, out.minimizer);
  out.bracket_lo = lo;
  out.bracket_hi = res.hi_used;
  out.scalar_solver_iters = res.iters;
  return out;
}

OracleOutput lmo(const SymmetricMatrix& lambda, const AmbiguityBall& ball) {
  switch (ball.kind()) {
    case Distance::Frobenius:
      return lmo_frobenius(lambda, ball);
    case Distance::KL:
      return lmo_kl(lambda, ball);
    case Distance::Gelbrich:
      return lmo_gelbrich(lambda, ball);
  }
  throw InputError("lmo: unknown ball kind");
}

namespace {

// Frobenius-diameter bound on how far ball members stray from the center.
double ball_reach(const AmbiguityBall& ball) {
  const double eps = ball.radius();
  switch (ball.kind()) {
    case Distance::Frobenius:
      return eps;
    case Distance::KL: {
      double n = static_cast<double>(ball.center().dim());
      double spread = (eps <= 1.0 / 24.0) ? std::sqrt(6.0 * eps) : 6.0 * eps + 0.25;
      return (n * spread + 2.0) * ball.center_frobenius();
    }
    case Distance::Gelbrich:
      return (2.0 * std::sqrt(std::max(0.0, ball.center_lambda_max())) + eps) * eps;
  }
  return eps;
}

// Convex-in-Sigma membership function whose eps-level set is the ball
// (squared Gelbrich distance keeps convexity; KL and Frobenius are convex
// as they stand).  Arguments are PSD-projected first so near-cone points
// remain in the domain.
double ball_fn(const AmbiguityBall& ball, const SymmetricMatrix& sig) {
  SymmetricMatrix s = psd_project(sig);
  if (ball.kind() == Distance::Gelbrich) {
    double d = dist_gelbrich(s, ball.center());
    return d * d;
  }
  return dist(ball.kind(), s, ball.center());
}

double ball_level(const AmbiguityBall& ball) {
  const double eps = ball.radius();
  return ball.kind() == Distance::Gelbrich ? eps * eps : eps;
}

// n = 1: the ball is an interval around the center, so the linear objective
// is minimized at the endpoint matching the sign of lambda; locate it by
// bisection on the membership function.
OracleOutput bruteforce_interval(const SymmetricMatrix& lambda, const AmbiguityBall& ball) {
  const double hat = ball.center()(0, 0);
  const double level = ball_level(ball);
  auto member = [&](double x) {
    SymmetricMatrix s(1);
    s.set(0, 0, x);
    return ball_fn(ball, s) <= level;
  };
  const double lam = lambda(0, 0);
  double edge;
  if (lam >= 0.0) {
    if (member(0.0)) {
      edge = 0.0;
    } else {
      double lo = 0.0, hi = hat;
      for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        (member(mid) ? hi : lo) = mid;
      }
      edge = hi;
    }
  } else {
    double lo = hat, hi = hat + ball_reach(ball) + 1.0;
    if (member(hi)) {
      edge = hi;
    } else {
      for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        (member(mid) ? lo : hi) = mid;
      }
      edge = lo;
    }
  }
  OracleOutput out;
  out.minimizer = SymmetricMatrix(1);
  out.minimizer.set(0, 0, edge);
  out.dual_value = lam * edge;
  out.scalar_solver_iters = 100;
  return out;
}

}  // namespace

OracleOutput lmo_bruteforce(const SymmetricMatrix& lambda, const AmbiguityBall& ball, int steps,
                            double rate) {
  const int n = lambda.dim();
  if (n > 6) throw InputError("lmo_bruteforce: dim > 6 (validation-scale oracle)");
  if (steps <= 0 || !(rate > 0.0))
    throw InputError("lmo_bruteforce: steps and rate must be positive");
  if (is_degenerate(lambda, ball)) return degenerate_output(lambda, ball);
  if (n == 1) return bruteforce_interval(lambda, ball);

  const SymmetricMatrix& hat = ball.center();
  const double level = ball_level(ball);

  // Ellipsoid method over the upper-triangle coordinates x (dim m), with the
  // symmetric embedding Sigma(x).  A matrix gradient G maps to the x-space
  // gradient (G_ii on the diagonal, 2 G_ij off it).
  const int m = n * (n + 1) / 2;
  auto to_x = [&](const SymmetricMatrix& s) {
    std::vector<double> x(static_cast<size_t>(m));
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) x[static_cast<size_t>(k++)] = s(i, j);
    return x;
  };
  auto to_mat = [&](const std::vector<double>& x) {
    SymmetricMatrix s(n);
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) s.set(i, j, x[static_cast<size_t>(k++)]);
    return s;
  };
  auto grad_to_x = [&](const SymmetricMatrix& g) {
    std::vector<double> x(static_cast<size_t>(m));
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) x[static_cast<size_t>(k++)] = (i == j) ? g(i, j) : 2.0 * g(i, j);
    return x;
  };

  // Central-difference gradient of the membership function.  set() writes
  // both triangle entries, so the measured off-diagonal derivative is the
  // x-coordinate one; halving converts it to the matrix-entry gradient that
  // grad_to_x expects.
  auto num_grad = [&](const SymmetricMatrix& s) {
    double h = 1e-6 * std::max(1.0, s.max_abs());
    SymmetricMatrix g(n), sp = s, sm = s;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = s(i, j);
        sp.set(i, j, v + h);
        sm.set(i, j, v - h);
        double d = (ball_fn(ball, sp) - ball_fn(ball, sm)) / (2.0 * h);
        g.set(i, j, i == j ? d : 0.5 * d);
        sp.set(i, j, v);
        sm.set(i, j, v);
      }
    return g;
  };

  // initial ball: centered at the ambiguity-ball center, radius covering it
  const double radius = rate * (ball_reach(ball) + 1.0);
  std::vector<double> xc = to_x(hat);
  std::vector<double> p(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) p[static_cast<size_t>(i) * m + i] = radius * radius;

  SymmetricMatrix best = hat;
  double best_val = inner(lambda, hat);

  // Every PSD center yields a feasible candidate: f is convex with
  // f(center) = 0, so shrinking by tau = level / f(s) lands inside the ball.
  auto harvest = [&](const SymmetricMatrix& s, double f) {
    SymmetricMatrix cand = s;
    if (f > level) {
      if (!std::isfinite(f)) return;
      cand = hat + (level / f) * (s - hat);
    }
    double v = inner(lambda, cand);
    if (v < best_val) {
      best_val = v;
      best = cand;
    }
  };

  for (int it = 0; it < steps; ++it) {
    SymmetricMatrix sc = to_mat(xc);
    SpectralDecomposition dec = eig_sym(sc);
    SymmetricMatrix cut_mat(n);
    double cut_depth = 0.0;  // violation in the cut's own units; 0 = central
    if (dec.values.back() < 0.0) {
      // PSD cut: feasible points satisfy <vv^T, Sigma> >= 0 > lambda_min(center)
      int k_min = n - 1;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          cut_mat.set(i, j, -dec.vectors[static_cast<size_t>(k_min) * n + i] *
                                dec.vectors[static_cast<size_t>(k_min) * n + j]);
      cut_depth = -dec.values.back();
      SymmetricMatrix proj = psd_project(sc);
      harvest(proj, ball_fn(ball, proj));
    } else {
      double f = ball_fn(ball, sc);
      harvest(sc, f);
      if (f <= level) {
        cut_mat = lambda;
        cut_depth = inner(lambda, sc) - best_val;
      } else if (std::isfinite(f)) {
        cut_mat = num_grad(sc);
        cut_depth = f - level;
      } else {
        // KL blow-up at a singular center: every ball member keeps
        // lambda_min above the center's, so the smallest-eigenvector cut
        // separates
        int k_min = n - 1;
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j)
            cut_mat.set(i, j, -dec.vectors[static_cast<size_t>(k_min) * n + i] *
                                  dec.vectors[static_cast<size_t>(k_min) * n + j]);
      }
    }

    std::vector<double> g = grad_to_x(cut_mat);
    std::vector<double> pg(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += p[static_cast<size_t>(i) * m + j] * g[static_cast<size_t>(j)];
      pg[static_cast<size_t>(i)] = acc;
    }
    double gpg = 0.0;
    for (int i = 0; i < m; ++i) gpg += g[static_cast<size_t>(i)] * pg[static_cast<size_t>(i)];
    if (!(gpg > 1e-300) || !std::isfinite(gpg)) break;
    double denom = std::sqrt(gpg);
    double mm = static_cast<double>(m);
    // deep-cut update; alpha = 0 is the central cut
    double alpha = std::min(0.999, std::max(0.0, cut_depth) / denom);
    double tau = (1.0 + mm * alpha) / (mm + 1.0);
    double scale = (mm * mm / (mm * mm - 1.0)) * (1.0 - alpha * alpha);
    double sigma = 2.0 * (1.0 + mm * alpha) / ((mm + 1.0) * (1.0 + alpha));
    for (int i = 0; i < m; ++i) xc[static_cast<size_t>(i)] -= tau * pg[static_cast<size_t>(i)] / denom;
    double coef = sigma / gpg;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        double v = scale * (0.5 * (p[static_cast<size_t>(i) * m + j] +
                                   p[static_cast<size_t>(j) * m + i]) -
                            coef * pg[static_cast<size_t>(i)] * pg[static_cast<size_t>(j)]);
        p[static_cast<size_t>(i) * m + j] = v;
        p[static_cast<size_t>(j) * m + i] = v;
      }
  }

  OracleOutput out;
  out.minimizer = psd_project(best);
  out.dual_value = inner(lambda, out.minimizer);
  out.scalar_solver_iters = steps;
  return out;
}

LipschitzBound lipschitz_bound(const AmbiguityBall& ball) {
  const double eps = ball.radius();
  const double hat_fro = ball.center_frobenius();
  LipschitzBound out;
  out.kind = ball.kind();
  switch (ball.kind()) {
    case Distance::Frobenius:
      out.value = eps + hat_fro;
      break;
    case Distance::KL: {
      double n = static_cast<double>(ball.center().dim());
      double spread = (eps <= 1.0 / 24.0) ? n * std::sqrt(6.0 * eps) : n * (6.0 * eps + 0.25);
      out.value = (spread + 1.0) * hat_fro;
      break;
    }
    case Distance::Gelbrich: {
      double root_lam_max = std::sqrt(std::max(0.0, ball.center_lambda_max()));
      out.value = (2.0 * root_lam_max + eps) * eps + hat_fro;
      break;
    }
  }
  return out;
}

}  // namespace facmod

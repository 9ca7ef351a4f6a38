#include "facmod/distances.hpp"

#include <cmath>
#include <limits>

#include "facmod/errors.hpp"

namespace facmod {

const char* distance_name(Distance kind) {
  switch (kind) {
    case Distance::Frobenius: return "frobenius";
    case Distance::KL: return "kl";
    case Distance::Gelbrich: return "gelbrich";
  }
  return "unknown";
}

Distance distance_from_name(const std::string& name) {
  if (name == "frobenius") return Distance::Frobenius;
  if (name == "kl") return Distance::KL;
  if (name == "gelbrich") return Distance::Gelbrich;
  throw InputError("unknown distance '" + name + "' (expected frobenius, kl, or gelbrich)");
}

AmbiguityBall::AmbiguityBall(SymmetricMatrix center, double radius, Distance kind)
    : center_(std::move(center)), radius_(radius), kind_(kind) {
  if (!(radius_ >= 0.0) || !std::isfinite(radius_)) {
    throw InputError("ball radius must be a nonnegative finite number");
  }
  center_eig_ = eig_sym(center_);
  double lo = center_eig_.values.back();
  double hi = center_eig_.values.front();
  if (lo < -tol_pd(hi)) throw InputError("ball center is not positive semidefinite");
  if (kind_ == Distance::KL && lo < tol_pd(hi)) {
    throw InputError("KL ball center must be positive definite");
  }
  std::vector<double> roots(center_eig_.values);
  for (double& v : roots) v = std::sqrt(std::max(v, 0.0));
  center_sqrt_ = assemble(center_eig_, roots);
  center_fro_ = center_.frobenius_norm();
}

double dist_frobenius(const SymmetricMatrix& sigma, const SymmetricMatrix& hat) {
  return (sigma - hat).frobenius_norm();
}

double dist_kl(const SymmetricMatrix& sigma, const SymmetricMatrix& hat) {
  if (sigma.dim() != hat.dim()) throw InputError("dimension mismatch");
  const int n = sigma.dim();
  SpectralDecomposition hat_dec = eig_sym(hat);
  if (hat_dec.values.back() < tol_pd(hat_dec.values.front())) {
    throw InputError("KL reference matrix must be positive definite");
  }
  SpectralDecomposition sig_dec = eig_sym(sigma);
  if (sig_dec.values.back() < tol_pd(sig_dec.values.front())) {
    return std::numeric_limits<double>::infinity();
  }
  double logdet_sigma = 0.0, logdet_hat = 0.0;
  for (int i = 0; i < n; ++i) {
    logdet_sigma += std::log(sig_dec.values[static_cast<size_t>(i)]);
    logdet_hat += std::log(hat_dec.values[static_cast<size_t>(i)]);
  }
  std::vector<double> inv_vals(hat_dec.values);
  for (double& v : inv_vals) v = 1.0 / v;
  SymmetricMatrix hat_inv = assemble(hat_dec, inv_vals);
  double tr = inner(sigma, hat_inv);
  return 0.5 * (-logdet_sigma + logdet_hat + tr - n);
}

double dist_gelbrich(const SymmetricMatrix& sigma, const SymmetricMatrix& hat) {
  if (sigma.dim() != hat.dim()) throw InputError("dimension mismatch");
  const int n = sigma.dim();
  SpectralDecomposition hat_dec = eig_sym(hat);
  if (hat_dec.values.back() < -tol_pd(hat_dec.values.front())) {
    throw InputError("Gelbrich arguments must be positive semidefinite");
  }
  SpectralDecomposition sig_dec = eig_sym(sigma);
  if (sig_dec.values.back() < -tol_pd(sig_dec.values.front())) {
    throw InputError("Gelbrich arguments must be positive semidefinite");
  }
  std::vector<double> roots(hat_dec.values);
  for (double& v : roots) v = std::sqrt(std::max(v, 0.0));
  SymmetricMatrix hat_sqrt = assemble(hat_dec, roots);
  std::vector<double> sbuf(hat_sqrt.data(), hat_sqrt.data() + static_cast<size_t>(n) * n);
  SymmetricMatrix mid = congruence(n, sbuf, sigma);
  SpectralDecomposition mid_dec = eig_sym(mid);
  double cross = 0.0;
  for (double v : mid_dec.values) cross += std::sqrt(std::max(v, 0.0));
  double arg = sigma.trace() + hat.trace() - 2.0 * cross;
  return std::sqrt(std::max(arg, 0.0));
}

double dist(Distance kind, const SymmetricMatrix& sigma, const SymmetricMatrix& hat) {
  switch (kind) {
    case Distance::Frobenius: return dist_frobenius(sigma, hat);
    case Distance::KL: return dist_kl(sigma, hat);
    case Distance::Gelbrich: return dist_gelbrich(sigma, hat);
  }
  throw InputError("unknown distance kind");
}

double kl_lower_bound_f(double x) {
  if (x < 0.0) throw InputError("kl_lower_bound_f requires a nonnegative argument");
  if (x <= 1.5) return (x - 1.0) * (x - 1.0) / 3.0;
  return x / 3.0 - 5.0 / 12.0;
}

double gelbrich_strong_convexity_bound(const SymmetricMatrix& sigma, const SymmetricMatrix& hat,
                                       double eps) {
  double lam = std::max(lambda_max(hat), 0.0);
  return dist_frobenius(sigma, hat) / (2.0 * std::sqrt(lam) + eps);
}

bool in_ball(const SymmetricMatrix& sigma, const AmbiguityBall& ball) {
  SpectralDecomposition dec = eig_sym(sigma);
  if (dec.values.back() < -tol_pd(dec.values.front())) return false;
  double d = dist(ball.kind(), sigma, ball.center());
  return d <= ball.radius() + tol_feas(ball.radius());
}

}  // namespace facmod

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "facmod/spectral.hpp"
#include "facmod/sym_matrix.hpp"

namespace facmod {

enum class Distance { Frobenius, KL, Gelbrich };

const char* distance_name(Distance kind);
Distance distance_from_name(const std::string& name);

// Membership slack for boundary points produced by scalar root-finders.
inline double tol_feas(double radius) { return 1e-7 * std::max(1.0, radius); }

// Ball of covariance matrices {Sigma PSD : dist(Sigma, center) <= radius}.
// The center's eigendecomposition and square root are computed once at
// construction and shared; the object is immutable and safe across threads.
class AmbiguityBall {
public:
  AmbiguityBall(SymmetricMatrix center, double radius, Distance kind);

  const SymmetricMatrix& center() const { return center_; }
  double radius() const { return radius_; }
  Distance kind() const { return kind_; }

  const SpectralDecomposition& center_eig() const { return center_eig_; }
  const SymmetricMatrix& center_sqrt() const { return center_sqrt_; }
  double center_lambda_max() const { return center_eig_.values.front(); }
  double center_frobenius() const { return center_fro_; }

private:
  SymmetricMatrix center_;
  double radius_;
  Distance kind_;
  SpectralDecomposition center_eig_;
  SymmetricMatrix center_sqrt_;
  double center_fro_;
};

double dist_frobenius(const SymmetricMatrix& sigma, const SymmetricMatrix& hat);

// Divergence between zero-mean normals with the given covariances.  Requires
// hat to be positive definite; returns +infinity when sigma is singular, so
// membership tests compose.
double dist_kl(const SymmetricMatrix& sigma, const SymmetricMatrix& hat);

double dist_gelbrich(const SymmetricMatrix& sigma, const SymmetricMatrix& hat);

double dist(Distance kind, const SymmetricMatrix& sigma, const SymmetricMatrix& hat);

// Piecewise eigenvalue penalty whose sum lower-bounds twice the KL divergence:
// (1/3)(x-1)^2 on [0, 3/2], x/3 - 5/12 beyond (continuous at 3/2).
double kl_lower_bound_f(double x);

// Certified lower bound on the Gelbrich distance over the radius-eps ball:
// ||Sigma - hat||_F / (2 lambda_max^{1/2}(hat) + eps).
double gelbrich_strong_convexity_bound(const SymmetricMatrix& sigma, const SymmetricMatrix& hat,
                                       double eps);

bool in_ball(const SymmetricMatrix& sigma, const AmbiguityBall& ball);

}  // namespace facmod

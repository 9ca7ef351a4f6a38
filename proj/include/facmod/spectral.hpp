#pragma once

#include <functional>
#include <vector>

#include "facmod/sym_matrix.hpp"

namespace facmod {

// Eigendecomposition A = V diag(values) V^T with values sorted descending.
// vectors is column-major: column k (entries vectors[i + k*n], i = 0..n-1)
// pairs with values[k].  Columns are orthonormal up to round-off.
struct SpectralDecomposition {
  int n = 0;
  std::vector<double> values;
  std::vector<double> vectors;

  SymmetricMatrix reconstruct() const;
};

// Cyclic Jacobi sweeps, capped at 100; stops once the off-diagonal Frobenius
// norm falls below 1e-12 * ||A||_F.  Deterministic for identical input bits.
// Throws SolverError if the cap is hit without reaching the threshold.
SpectralDecomposition eig_sym(const SymmetricMatrix& a);

// Rebuild V f(theta) V^T from a decomposition and transformed eigenvalues.
SymmetricMatrix assemble(const SpectralDecomposition& dec, const std::vector<double>& values);

// Entrywise spectral map V f(theta) V^T.
SymmetricMatrix spectral_fn(const SymmetricMatrix& a, const std::function<double(double)>& f);

// Nearest (Frobenius) positive semidefinite matrix: negative eigenvalues
// clamped to zero in A's eigenbasis.
SymmetricMatrix psd_project(const SymmetricMatrix& a);

// Positive-definiteness floor used by domain guards: 1e-10 * max(1, lambda_max).
double tol_pd(double lambda_max);

// Spectral square root; eigenvalues in [-tol_pd, 0) are clamped to zero,
// anything lower throws SolverError.
SymmetricMatrix sqrt_psd(const SymmetricMatrix& a);

// Inverse of a positive definite matrix; throws SolverError when
// lambda_min < tol_pd(lambda_max).
SymmetricMatrix inverse_spd(const SymmetricMatrix& a);

double lambda_max(const SymmetricMatrix& a);
double lambda_min(const SymmetricMatrix& a);

// Sum of absolute eigenvalues.
double nuclear_norm(const SymmetricMatrix& a);

// Congruence V B V^T for a column-major square V (not necessarily symmetric);
// the result is symmetrized.  transposed = true computes V^T B V instead.
SymmetricMatrix congruence(int n, const std::vector<double>& v_colmajor,
                           const SymmetricMatrix& b, bool transposed = false);

}  // namespace facmod

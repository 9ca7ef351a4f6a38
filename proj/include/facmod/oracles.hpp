#pragma once

#include "facmod/distances.hpp"
#include "facmod/sym_matrix.hpp"

namespace facmod {

// Matrices with Frobenius norm at or below this are treated as zero by the
// oracles (any ball point is then optimal; the center is returned).
inline constexpr double kTolZero = 1e-12;

// Result of a linear minimization oracle argmin{<Lambda, Sigma> : Sigma in
// ball}.  multiplier is the scalar gamma* of the distance constraint
// (0 when the constraint is inactive or the input was degenerate),
// dual_value = <Lambda, minimizer>, and [bracket_lo, bracket_hi] is the
// gamma interval the scalar search actually ran on ((0, 0) for the
// degenerate short-circuits).
struct OracleOutput {
  SymmetricMatrix minimizer;
  double multiplier = 0.0;
  double dual_value = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int scalar_solver_iters = 0;
};

struct LipschitzBound {
  double value = 0.0;
  Distance kind = Distance::Frobenius;
};

OracleOutput lmo_frobenius(const SymmetricMatrix& lambda, const AmbiguityBall& ball);
OracleOutput lmo_kl(const SymmetricMatrix& lambda, const AmbiguityBall& ball);
OracleOutput lmo_gelbrich(const SymmetricMatrix& lambda, const AmbiguityBall& ball);

// Dispatches on ball.kind().
OracleOutput lmo(const SymmetricMatrix& lambda, const AmbiguityBall& ball);

// Independent reference oracle for validation at dim <= 6: the ellipsoid
// method over the upper-triangle coordinates, with eigenvector cuts for the
// PSD cone and numerical-gradient cuts for the (convex) ball membership
// function.  steps is the iteration budget and rate scales the initial
// search radius.  Returns the best feasible point seen.
OracleOutput lmo_bruteforce(const SymmetricMatrix& lambda, const AmbiguityBall& ball,
                            int steps = 4000, double rate = 2.0);

// Closed-form upper bound on the Lipschitz constant of the dual function
// d(Lambda) = min{<Lambda, Sigma> : Sigma in ball} w.r.t. the Frobenius norm.
LipschitzBound lipschitz_bound(const AmbiguityBall& ball);

}  // namespace facmod

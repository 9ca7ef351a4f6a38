#pragma once

#include <vector>

#include "facmod/sym_matrix.hpp"

namespace facmod {

// Outcome of the alternating-correction projection: value is the last
// S2-projected iterate (feasible for S2 exactly, for S1 within tol), z1/z2
// are the final correction terms, and residual_history records the stopping
// residual of every sweep.
struct DykstraResult {
  SymmetricMatrix value;
  SymmetricMatrix z1;
  SymmetricMatrix z2;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  std::vector<double> residual_history;
};

// Exact Frobenius projection onto {diag(A) <= 0}: entrywise diagonal clamp.
SymmetricMatrix project_S1(const SymmetricMatrix& a);

// Exact Frobenius projection onto {A <= I}: eigenvalues clamped from above
// at 1 in A's own eigenbasis.
SymmetricMatrix project_S2(const SymmetricMatrix& a);

// Dykstra's alternating projection onto the intersection of the two sets,
// S1 first.  Stops when ||U2-U1||_F / ||U2||_F < tol (absolute residual when
// ||U2||_F vanishes) or at max_iters (converged = false, best iterate kept).
DykstraResult dykstra_project(const SymmetricMatrix& a, int max_iters = 10000,
                              double tol = 1e-6);

}  // namespace facmod

#include "facmod/projection.hpp"

#include <algorithm>
#include <vector>

#include "facmod/errors.hpp"
#include "facmod/spectral.hpp"

namespace facmod {

SymmetricMatrix project_S1(const SymmetricMatrix& a) {
  SymmetricMatrix r = a;
  for (int i = 0; i < r.dim(); ++i) {
    if (r(i, i) > 0.0) r.set(i, i, 0.0);
  }
  return r;
}

SymmetricMatrix project_S2(const SymmetricMatrix& a) {
  SpectralDecomposition dec = eig_sym(a);
  if (dec.values.front() <= 1.0) return a;
  std::vector<double> clamped = dec.values;
  for (double& v : clamped) v = std::min(v, 1.0);
  return assemble(dec, clamped);
}

DykstraResult dykstra_project(const SymmetricMatrix& a, int max_iters,
                              double tol) {
  if (max_iters < 1) throw InputError("dykstra_project: max_iters must be >= 1");
  if (!(tol > 0.0)) throw InputError("dykstra_project: tol must be positive");

  const int n = a.dim();
  DykstraResult out;
  out.z1 = SymmetricMatrix(n);
  out.z2 = SymmetricMatrix(n);
  if (a.frobenius_norm() == 0.0) {
    out.value = a;
    out.converged = true;
    return out;
  }

  SymmetricMatrix u2 = a;
  out.residual_history.reserve(64);
  for (int k = 1; k <= max_iters; ++k) {
    SymmetricMatrix y1 = u2 + out.z1;
    SymmetricMatrix u1 = project_S1(y1);
    out.z1 = y1 - u1;
    SymmetricMatrix y2 = u1 + out.z2;
    u2 = project_S2(y2);
    out.z2 = y2 - u2;

    const double diff = (u2 - u1).frobenius_norm();
    const double denom = u2.frobenius_norm();
    // Relative residual, absolute once the iterate itself degenerates to 0.
    const double res = denom > 1e-12 ? diff / denom : diff;
    out.iterations = k;
    out.residual = res;
    out.residual_history.push_back(res);
    if (res < tol) {
      out.converged = true;
      break;
    }
  }
  out.value = u2;
  return out;
}

}  // namespace facmod

#include "facmod/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "facmod/errors.hpp"

namespace facmod {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffTolScale = 1e-12;

double off_diagonal_norm(int n, const double* a) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double x = a[static_cast<size_t>(i) * n + j];
      s += x * x;
    }
  }
  return std::sqrt(2.0 * s);
}

// One cyclic sweep of Jacobi rotations over all index pairs p < q.
// a is the row-major working matrix (both triangles kept in sync), v the
// row-major rotation accumulator with eigenvectors in its columns.
void jacobi_sweep(int n, double* a, double* v) {
  for (int p = 0; p < n - 1; ++p) {
    for (int q = p + 1; q < n; ++q) {
      double apq = a[static_cast<size_t>(p) * n + q];
      if (apq == 0.0) continue;
      double app = a[static_cast<size_t>(p) * n + p];
      double aqq = a[static_cast<size_t>(q) * n + q];
      double theta = 0.5 * (aqq - app) / apq;
      double t;
      if (std::fabs(theta) > 1e150) {
        t = 0.5 / theta;
      } else {
        t = 1.0 / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
      }
      double c = 1.0 / std::sqrt(1.0 + t * t);
      double s = t * c;
      double tau = s / (1.0 + c);

      a[static_cast<size_t>(p) * n + p] = app - t * apq;
      a[static_cast<size_t>(q) * n + q] = aqq + t * apq;
      a[static_cast<size_t>(p) * n + q] = 0.0;
      a[static_cast<size_t>(q) * n + p] = 0.0;
      for (int i = 0; i < n; ++i) {
        if (i == p || i == q) continue;
        double aip = a[static_cast<size_t>(i) * n + p];
        double aiq = a[static_cast<size_t>(i) * n + q];
        double nip = aip - s * (aiq + tau * aip);
        double niq = aiq + s * (aip - tau * aiq);
        a[static_cast<size_t>(i) * n + p] = nip;
        a[static_cast<size_t>(p) * n + i] = nip;
        a[static_cast<size_t>(i) * n + q] = niq;
        a[static_cast<size_t>(q) * n + i] = niq;
      }
      for (int i = 0; i < n; ++i) {
        double vip = v[static_cast<size_t>(i) * n + p];
        double viq = v[static_cast<size_t>(i) * n + q];
        v[static_cast<size_t>(i) * n + p] = vip - s * (viq + tau * vip);
        v[static_cast<size_t>(i) * n + q] = viq + s * (vip - tau * viq);
      }
    }
  }
}

}  // namespace

SymmetricMatrix SpectralDecomposition::reconstruct() const { return assemble(*this, values); }

SpectralDecomposition eig_sym(const SymmetricMatrix& a) {
  const int n = a.dim();
  std::vector<double> work(a.data(), a.data() + static_cast<size_t>(n) * n);
  std::vector<double> rot(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) rot[static_cast<size_t>(i) * n + i] = 1.0;

  const double threshold = kOffTolScale * a.frobenius_norm();
  bool converged = off_diagonal_norm(n, work.data()) <= threshold;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    jacobi_sweep(n, work.data(), rot.data());
    converged = off_diagonal_norm(n, work.data()) <= threshold;
  }
  if (!converged) throw SolverError("eigensolver did not converge within the sweep cap");

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return work[static_cast<size_t>(i) * n + i] > work[static_cast<size_t>(j) * n + j];
  });

  SpectralDecomposition dec;
  dec.n = n;
  dec.values.resize(static_cast<size_t>(n));
  dec.vectors.resize(static_cast<size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    int src = order[static_cast<size_t>(k)];
    dec.values[static_cast<size_t>(k)] = work[static_cast<size_t>(src) * n + src];
    for (int i = 0; i < n; ++i) {
      dec.vectors[static_cast<size_t>(k) * n + i] = rot[static_cast<size_t>(i) * n + src];
    }
  }
  return dec;
}

SymmetricMatrix assemble(const SpectralDecomposition& dec, const std::vector<double>& values) {
  const int n = dec.n;
  if (values.size() != static_cast<size_t>(n)) throw InputError("eigenvalue count mismatch");
  SymmetricMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += values[static_cast<size_t>(k)] * dec.vectors[static_cast<size_t>(k) * n + i] *
             dec.vectors[static_cast<size_t>(k) * n + j];
      }
      out.set(i, j, s);
    }
  }
  return out;
}

SymmetricMatrix spectral_fn(const SymmetricMatrix& a, const std::function<double(double)>& f) {
  SpectralDecomposition dec = eig_sym(a);
  std::vector<double> vals(dec.values.size());
  for (size_t k = 0; k < vals.size(); ++k) vals[k] = f(dec.values[k]);
  return assemble(dec, vals);
}

SymmetricMatrix psd_project(const SymmetricMatrix& a) {
  SpectralDecomposition dec = eig_sym(a);
  if (dec.values.back() >= 0.0) return a;
  std::vector<double> vals(dec.values);
  for (double& v : vals) v = std::max(v, 0.0);
  return assemble(dec, vals);
}

double tol_pd(double lambda_max) { return 1e-10 * std::max(1.0, lambda_max); }

SymmetricMatrix sqrt_psd(const SymmetricMatrix& a) {
  SpectralDecomposition dec = eig_sym(a);
  double floor = -tol_pd(dec.values.front());
  if (dec.values.back() < floor) {
    throw SolverError("square root requested for a matrix with a negative eigenvalue");
  }
  std::vector<double> vals(dec.values);
  for (double& v : vals) v = std::sqrt(std::max(v, 0.0));
  return assemble(dec, vals);
}

SymmetricMatrix inverse_spd(const SymmetricMatrix& a) {
  SpectralDecomposition dec = eig_sym(a);
  if (dec.values.back() < tol_pd(dec.values.front())) {
    throw SolverError("inverse requested for a matrix that is not positive definite");
  }
  std::vector<double> vals(dec.values);
  for (double& v : vals) v = 1.0 / v;
  return assemble(dec, vals);
}

double lambda_max(const SymmetricMatrix& a) { return eig_sym(a).values.front(); }

double lambda_min(const SymmetricMatrix& a) { return eig_sym(a).values.back(); }

double nuclear_norm(const SymmetricMatrix& a) {
  SpectralDecomposition dec = eig_sym(a);
  double s = 0.0;
  for (double v : dec.values) s += std::fabs(v);
  return s;
}

SymmetricMatrix congruence(int n, const std::vector<double>& v_colmajor,
                           const SymmetricMatrix& b, bool transposed) {
  if (v_colmajor.size() != static_cast<size_t>(n) * n || b.dim() != n) {
    throw InputError("congruence dimension mismatch");
  }
  auto vat = [&](int i, int k) { return v_colmajor[static_cast<size_t>(k) * n + i]; };
  // t = B * V (or B * V^T), then result = V^T * t (or V * t).
  std::vector<double> t(static_cast<size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < n; ++l) {
        s += b(k, l) * (transposed ? vat(l, j) : vat(j, l));
      }
      t[static_cast<size_t>(k) * n + j] = s;
    }
  }
  std::vector<double> r(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += (transposed ? vat(k, i) : vat(i, k)) * t[static_cast<size_t>(k) * n + j];
      }
      r[static_cast<size_t>(i) * n + j] = s;
    }
  }
  return SymmetricMatrix::symmetrized(n, r);
}

}  // namespace facmod

#include "facmod/sym_matrix.hpp"

#include <cmath>
#include <cstdlib>

#include "facmod/errors.hpp"

namespace facmod {

namespace {

void require_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError("matrix entry is not finite");
  }
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {
  if (n <= 0) throw InputError("matrix order must be positive");
}

SymmetricMatrix SymmetricMatrix::identity(int n) {
  SymmetricMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymmetricMatrix SymmetricMatrix::diagonal(const std::vector<double>& d) {
  require_finite(d);
  SymmetricMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.n_; ++i) m.set(i, i, d[static_cast<size_t>(i)]);
  return m;
}

SymmetricMatrix SymmetricMatrix::from_dense(int n, const std::vector<double>& row_major,
                                            double asym_tol) {
  if (n <= 0) throw InputError("matrix order must be positive");
  if (row_major.size() != static_cast<size_t>(n) * n) {
    throw InputError("dense buffer size does not match matrix order");
  }
  require_finite(row_major);
  double max_entry = 0.0;
  double max_asym = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double x = row_major[static_cast<size_t>(i) * n + j];
      max_entry = std::max(max_entry, std::fabs(x));
      max_asym = std::max(max_asym, std::fabs(x - row_major[static_cast<size_t>(j) * n + i]));
    }
  }
  if (max_asym > asym_tol * std::max(1.0, max_entry)) {
    throw InputError("matrix is asymmetric beyond tolerance");
  }
  return symmetrized(n, row_major);
}

SymmetricMatrix SymmetricMatrix::symmetrized(int n, const std::vector<double>& row_major) {
  if (row_major.size() != static_cast<size_t>(n) * n) {
    throw InputError("dense buffer size does not match matrix order");
  }
  require_finite(row_major);
  SymmetricMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v = 0.5 * (row_major[static_cast<size_t>(i) * n + j] +
                        row_major[static_cast<size_t>(j) * n + i]);
      m.set(i, j, v);
    }
  }
  return m;
}

std::vector<double> SymmetricMatrix::diag() const {
  std::vector<double> d(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) d[static_cast<size_t>(i)] = (*this)(i, i);
  return d;
}

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SymmetricMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : a_) s += x * x;
  return std::sqrt(s);
}

double SymmetricMatrix::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::fabs(x));
  return m;
}

SymmetricMatrix& SymmetricMatrix::operator+=(const SymmetricMatrix& b) {
  if (n_ != b.n_) throw InputError("dimension mismatch");
  for (size_t k = 0; k < a_.size(); ++k) a_[k] += b.a_[k];
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator-=(const SymmetricMatrix& b) {
  if (n_ != b.n_) throw InputError("dimension mismatch");
  for (size_t k = 0; k < a_.size(); ++k) a_[k] -= b.a_[k];
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

double inner(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.dim() != b.dim()) throw InputError("dimension mismatch");
  const double* pa = a.data();
  const double* pb = b.data();
  size_t m = static_cast<size_t>(a.dim()) * a.dim();
  double s = 0.0;
  for (size_t k = 0; k < m; ++k) s += pa[k] * pb[k];
  return s;
}

}  // namespace facmod

#pragma once

#include <cstddef>
#include <vector>

namespace facmod {

// Dense real symmetric matrix of order n.  The full n*n buffer is kept
// row-major with both triangles in sync, so the same data() view works for
// kernels that do not care about orientation.  Constructors reject NaN and
// Inf entries; set() writes both (i,j) and (j,i).
class SymmetricMatrix {
public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(int n);

  static SymmetricMatrix identity(int n);
  static SymmetricMatrix diagonal(const std::vector<double>& d);
  // Strict ingestion: throws InputError when max_ij |a_ij - a_ji| exceeds
  // asym_tol * max(1, max_ij |a_ij|), otherwise stores (A + A^T)/2.
  static SymmetricMatrix from_dense(int n, const std::vector<double>& row_major,
                                    double asym_tol = 1e-12);
  // Lenient ingestion for internal round-off cleanup: always stores (A + A^T)/2.
  static SymmetricMatrix symmetrized(int n, const std::vector<double>& row_major);

  int dim() const { return n_; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  void set(int i, int j, double v) {
    a_[static_cast<size_t>(i) * n_ + j] = v;
    a_[static_cast<size_t>(j) * n_ + i] = v;
  }

  const double* data() const { return a_.data(); }
  double* data() { return a_.data(); }

  std::vector<double> diag() const;
  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  SymmetricMatrix& operator+=(const SymmetricMatrix& b);
  SymmetricMatrix& operator-=(const SymmetricMatrix& b);
  SymmetricMatrix& operator*=(double s);

  friend SymmetricMatrix operator+(SymmetricMatrix a, const SymmetricMatrix& b) { return a += b; }
  friend SymmetricMatrix operator-(SymmetricMatrix a, const SymmetricMatrix& b) { return a -= b; }
  friend SymmetricMatrix operator*(SymmetricMatrix a, double s) { return a *= s; }
  friend SymmetricMatrix operator*(double s, SymmetricMatrix a) { return a *= s; }

private:
  int n_ = 0;
  std::vector<double> a_;
};

// Frobenius inner product <A, B> = sum_ij A_ij B_ij.
double inner(const SymmetricMatrix& a, const SymmetricMatrix& b);

}  // namespace facmod

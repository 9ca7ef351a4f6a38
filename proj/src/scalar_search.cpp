#include "facmod/scalar_search.hpp"

#include <cmath>

namespace facmod {

ScalarSearchResult bisect_nonincreasing(const std::function<double(double)>& f, double lo,
                                        double hi, double rel_tol, double f_tol, int max_iters) {
  ScalarSearchResult res;
  for (; res.iters < max_iters; ++res.iters) {
    double scale = std::max(std::fabs(lo), std::fabs(hi));
    if (hi - lo <= rel_tol * scale) break;
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = f(mid);
    if (f_tol > 0.0 && std::fabs(fm) <= f_tol) {
      res.x = mid;
      ++res.iters;
      return res;
    }
    if (fm >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  res.x = 0.5 * (lo + hi);
  return res;
}

ScalarSearchResult golden_section_max(const std::function<double(double)>& g, double lo, double hi,
                                      double rel_tol, int max_iters) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double g1 = g(x1), g2 = g(x2);
  ScalarSearchResult res;
  for (; res.iters < max_iters; ++res.iters) {
    double scale = std::max(std::fabs(a), std::fabs(b));
    if (b - a <= rel_tol * scale) break;
    if (g1 < g2) {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + inv_phi * (b - a);
      g2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - inv_phi * (b - a);
      g1 = g(x1);
    }
  }
  res.x = 0.5 * (a + b);
  return res;
}

}  // namespace facmod

#pragma once

#include <functional>

namespace facmod {

struct ScalarSearchResult {
  double x = 0.0;
  int iters = 0;
};

// Locates the sign change of a nonincreasing function on [lo, hi], assuming
// f(lo) >= 0 >= f(hi).  Stops when the interval width falls below
// rel_tol * max(|lo|, |hi|) or |f| <= f_tol (pass f_tol = 0 to disable).
ScalarSearchResult bisect_nonincreasing(const std::function<double(double)>& f, double lo,
                                        double hi, double rel_tol, double f_tol = 0.0,
                                        int max_iters = 200);

// Golden-section maximizer for a unimodal function on [lo, hi].
ScalarSearchResult golden_section_max(const std::function<double(double)>& g, double lo, double hi,
                                      double rel_tol, int max_iters = 400);

}  // namespace facmod

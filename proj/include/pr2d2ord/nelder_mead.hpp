#pragma once

#include <functional>
#include <vector>

namespace pr2d2ord {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
};

/// Derivative-free simplex minimization (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). Stops when the simplex objective spread
/// falls below ftol or the iteration budget is exhausted.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, double initial_step,
                             int max_iters, double ftol);

}  // namespace pr2d2ord

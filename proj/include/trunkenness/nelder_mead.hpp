#pragma once

#include <functional>
#include <vector>

namespace trunk {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;  // simplex diameter fell below the tolerance
};

/// Derivative-free minimization with the standard reflection / expansion /
/// contraction / shrink coefficients (1, 2, 1/2, 1/2). The initial simplex
/// is x0 plus `step` along each axis. Stops when the largest distance from
/// the best vertex is below `tolerance` or after `budget` evaluations.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, double step, int budget, double tolerance);

}  // namespace trunk

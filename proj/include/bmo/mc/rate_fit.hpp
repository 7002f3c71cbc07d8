#pragma once

#include <span>
#include <vector>

namespace bmo::mc {

/// Least squares of log(error) on log(1/n): error ~ C n^{-slope}.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Standard error of the slope (n - 2 degrees of freedom).
  double slope_stderr = 0.0;
  std::vector<double> ns;
  std::vector<double> errors;
};

/// Throws ValidationError unless there are >= 3 points of equal count and
/// every n and error is positive and finite, with at least two distinct n.
RateFit rate_fit(std::span<const double> ns, std::span<const double> errors);

}  // namespace bmo::mc

#include "bmo/mc/rate_fit.hpp"

#include <algorithm>
#include <cmath>

#include "bmo/error.hpp"

namespace bmo::mc {

RateFit rate_fit(std::span<const double> ns, std::span<const double> errors) {
  if (ns.size() != errors.size()) throw ValidationError("rate_fit: ns and errors differ in length");
  if (ns.size() < 3) throw ValidationError("rate_fit: need at least 3 points");
  for (std::size_t i = 0; i < ns.size(); ++i)
    if (!(ns[i] > 0.0) || !(errors[i] > 0.0) || !std::isfinite(ns[i]) || !std::isfinite(errors[i]))
      throw ValidationError("rate_fit: every n and error must be positive and finite");

  const std::size_t k = ns.size();
  std::vector<double> x(k), y(k);
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = -std::log(ns[i]);
    y[i] = std::log(errors[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("rate_fit: need at least two distinct n");

  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  fit.slope_stderr = std::sqrt(sse / static_cast<double>(k - 2) / sxx);
  fit.ns.assign(ns.begin(), ns.end());
  fit.errors.assign(errors.begin(), errors.end());
  return fit;
}

}  // namespace bmo::mc

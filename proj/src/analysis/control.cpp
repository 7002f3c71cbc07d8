#include "bmo/analysis/control.hpp"

#include <algorithm>
#include <cmath>

#include "bmo/error.hpp"

namespace bmo::analysis {

OscillationControl pvar_control(const GridMatrix& rho, double p) {
  if (!(p >= 1.0)) throw ValidationError("pvar_control: p must be >= 1");
  const std::size_t n = rho.size();
  OscillationControl out{GridMatrix(n), p, std::nullopt};
  for (std::size_t len = 1; len < n; ++len) {
    for (std::size_t s = 0; s + len < n; ++s) {
      const std::size_t t = s + len;
      double best = std::pow(rho(s, t), p);
      for (std::size_t u = s + 1; u < t; ++u) best = std::max(best, out.w(s, u) + out.w(u, t));
      out.w(s, t) = best;
    }
  }
  return out;
}

double vmo_alpha_seminorm(const GridMatrix& rho, double alpha, double dt) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  double best = 0.0;
  for (std::size_t s = 0; s < rho.size(); ++s)
    for (std::size_t t = s + 1; t < rho.size(); ++t)
      best = std::max(best, rho(s, t) / std::pow(static_cast<double>(t - s) * dt, alpha));
  return best;
}

}  // namespace bmo::analysis

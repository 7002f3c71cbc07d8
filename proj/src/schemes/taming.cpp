#include "bmo/schemes/taming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bmo/error.hpp"

namespace bmo::schemes {

double TamingPolicy::level(double n) const {
  if (!(n >= 1.0)) throw ValidationError("taming: n must be >= 1");
  if (!enabled) return std::numeric_limits<double>::infinity();
  return std::pow(n, exponent) / std::pow(std::log(n + 1.0), log_power);
}

double TamingPolicy::diagnostic(double n) const { return level(n) / std::sqrt(n); }

std::string TamingPolicy::describe() const {
  if (!enabled) return "none";
  std::ostringstream os;
  os << "clip(n^" << exponent << " / log(n+1)^" << log_power << ")";
  return os.str();
}

TamedDrift tame_drift(const Field& b, double n, double q, const TamingPolicy& policy) {
  if (!b) throw ValidationError("tame_drift: drift is required");
  if (!(q > 0.0)) throw ValidationError("tame_drift: q must be positive");
  TamedDrift out;
  out.level = policy.level(n);
  out.diagnostic = policy.diagnostic(n);
  out.scaled_level = std::pow(1.0 / n, 0.5 - 1.0 / q) * out.level;
  if (!policy.enabled) {
    out.drift = b;
    return out;
  }
  out.drift = [b, m = out.level](double t, std::span<const double> x, std::span<double> o) {
    b(t, x, o);
    for (auto& v : o) v = std::clamp(v, -m, m);
  };
  return out;
}

}  // namespace bmo::schemes

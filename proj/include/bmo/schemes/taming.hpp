#pragma once

#include <string>

#include "bmo/schemes/sde.hpp"

namespace bmo::schemes {

/// Componentwise clipping of the drift at M_n = n^exponent / log(n + 1)^log_power.
struct TamingPolicy {
  bool enabled = true;
  double exponent = 0.5;
  double log_power = 1.0;

  static TamingPolicy clip() { return {}; }
  static TamingPolicy none() { return {false, 0.5, 1.0}; }

  /// M_n; +inf when disabled. n may be any real >= 1.
  double level(double n) const;
  /// M_n n^{-1/2}; 1 / log(n + 1) for the default policy.
  double diagnostic(double n) const;
  std::string describe() const;
};

struct TamedDrift {
  Field drift;
  double level = 0.0;
  /// M_n n^{-1/2}.
  double diagnostic = 0.0;
  /// (1/n)^{1/2 - 1/q} M_n: the size of the tamed drift in the scaling of the
  /// local integrability condition, reported for q > 2.
  double scaled_level = 0.0;
};

/// b^n = clamp(b, -M_n, M_n) componentwise; clamping also maps +-inf to
/// +-M_n. Throws ValidationError for n < 1 or q <= 0.
TamedDrift tame_drift(const Field& b, double n, double q, const TamingPolicy& policy);

}  // namespace bmo::schemes

#pragma once

#include <span>
#include <vector>

#include "bmo/mc/ensemble.hpp"
#include "bmo/mc/estimators.hpp"
#include "bmo/mc/functional.hpp"

namespace bmo::schemes {

struct DavieSamples {
  double x = 0.0;
  /// D = int_0^1 [g(t, B_t + x) - g(t, B_t)] dt per path (left-point sums).
  std::vector<double> samples;
  /// Evaluations of g that fell outside [-1, 1] and were clipped.
  std::size_t clipped = 0;
};

/// Requires a one-dimensional ensemble on [0, 1]. Unless test_mode is set, g
/// is clipped to [-1, 1]; the clip count is reported so callers can warn.
DavieSamples davie_functional(const mc::Integrand& g, double x, const mc::PathEnsemble& ensemble,
                              bool test_mode = false, unsigned jobs = 1);

/// Several shifts on the same paths. For g = sign every path is generated
/// once and all shifts run through the SIMD sign kernel.
std::vector<DavieSamples> davie_functional(const mc::Integrand& g, std::span<const double> xs,
                                           const mc::PathEnsemble& ensemble,
                                           bool test_mode = false, unsigned jobs = 1);

struct DavieMoments {
  double x = 0.0;
  mc::MomentEstimate m2;
  mc::MomentEstimate m4;
  /// E D^4 / (Gamma(3) (E D^2 / Gamma(2))^2).
  double gamma_ratio = 0.0;
};

DavieMoments davie_moments(const DavieSamples& d);

}  // namespace bmo::schemes

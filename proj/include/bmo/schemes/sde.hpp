#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace bmo::schemes {

/// out = field(t, x).
using Field = std::function<void(double t, std::span<const double> x, std::span<double> out)>;

/// dX = b(t, X) dt + sigma(t, X) dB, X_0 = x0, in dimension d. sigma writes a
/// d x d matrix, row-major.
struct SdeModel {
  std::string id = "custom";
  std::size_t dim = 1;
  std::vector<double> x0{0.0};
  Field drift;
  Field diffusion;

  /// Throws ValidationError on an inconsistent model.
  void validate() const;

  /// One-dimensional model from scalar callables.
  static SdeModel scalar(std::string id, std::function<double(double, double)> b,
                         std::function<double(double, double)> sigma, double x0);
  /// Named one-dimensional drifts with constant diffusion: "zero", "sign"
  /// (sign(0) = 0), "linear" (b(x) = -x), "constant" (b = c).
  static SdeModel named(const std::string& drift, double sigma, double x0, double c = 0.0);
};

struct EllipticityReport {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double k1 = 1.0;
  std::size_t n_samples = 0;
  /// K1^{-1} <= every eigenvalue of sigma sigma^T <= K1 at every sample.
  bool holds = false;
};

/// Samples sigma sigma^T at n_samples uniform points of [0, horizon] x
/// [-radius, radius]^d and records the extreme eigenvalues.
EllipticityReport check_ellipticity(const SdeModel& model, double k1, std::size_t n_samples,
                                    double radius, double horizon, std::uint64_t seed);

}  // namespace bmo::schemes

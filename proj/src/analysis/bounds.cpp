#include "bmo/analysis/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bmo/analysis/gamma.hpp"
#include "bmo/error.hpp"

namespace bmo::analysis {

namespace {

constexpr double kMax = std::numeric_limits<double>::max();

Bound from_log(double log_value) {
  if (log_value >= std::log(kMax)) return {kMax, true};
  return {std::exp(log_value), false};
}

}  // namespace

void BoundParameters::validate() const {
  if (!(p >= 1.0)) throw ValidationError("p must be >= 1");
  if (!(m >= 1.0)) throw ValidationError("m must be >= 1");
  if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
}

double BoundParameters::conjugate() const {
  return p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
}

Bound jn_moment_bound(double rho, int p) {
  if (p < 1) throw ValidationError("jn_moment_bound: p must be a positive integer");
  if (!(rho >= 0.0)) throw ValidationError("jn_moment_bound: rho must be non-negative");
  if (rho == 0.0) return {0.0, false};
  double factorial = 1.0;
  for (int k = 2; k <= p; ++k) factorial *= k;
  const double v = factorial * std::pow(11.0 * rho, p);
  if (std::isfinite(v)) return {v, false};
  return from_log(std::lgamma(p + 1.0) + p * std::log(11.0 * rho));
}

double khasminskii_product(double lambda, std::span<const double> rhos) {
  double prod = 1.0;
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    const double x = lambda * rhos[k];
    if (!(x < 1.0))
      throw ValidationError("partition too coarse: lambda * rho = " + std::to_string(x) +
                            " >= 1 on cell " + std::to_string(k));
    prod /= (1.0 - x);
  }
  return prod;
}

double log_exp_vmoa_bound(double lambda, double p, double w) {
  if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
  if (!(w >= 0.0)) throw ValidationError("w must be non-negative");
  return std::numbers::ln2 * (1.0 + std::pow(22.0 * lambda, p) * w);
}

Bound exp_vmoa_bound(double lambda, double p, double w) {
  return from_log(log_exp_vmoa_bound(lambda, p, w));
}

double vmo_moment_bound(double m, double p, double w, double C_p) {
  if (p == 1.0)
    throw ValidationError("vmo_moment_bound: p = 1 gives a pathwise bound, use v1_check");
  if (!(p > 1.0)) throw ValidationError("vmo_moment_bound: p must exceed 1");
  if (!(m >= 1.0)) throw ValidationError("vmo_moment_bound: m must be >= 1");
  if (!(C_p > 0.0)) throw ValidationError("vmo_moment_bound: C_p must be positive");
  if (!(w >= 0.0)) throw ValidationError("vmo_moment_bound: w must be non-negative");
  return C_p * gamma_lanczos(m * (1.0 - 1.0 / p) + 1.0) * std::pow(w, m / p);
}

Bound rsde_exp_bound(double lambda, double alpha, double seminorm, double tau) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
  if (!(seminorm >= 0.0) || !(tau >= 0.0))
    throw ValidationError("seminorm and tau must be non-negative");
  const double p = 1.0 / alpha;
  return exp_vmoa_bound(lambda, p, std::pow(seminorm, p) * tau);
}

}  // namespace bmo::analysis

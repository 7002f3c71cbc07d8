#pragma once
// Closed-form right-hand sides of the moment and exponential estimates.

#include <span>

namespace bmo::analysis {

/// A bound value; `saturated` marks a result clamped to DBL_MAX on overflow.
struct Bound {
  double value = 0.0;
  bool saturated = false;
};

/// Parameters shared by the bound calculators. c_p and C_p stand for
/// constants the theory leaves unspecified; callers supply them.
struct BoundParameters {
  double p = 1.0;
  double m = 1.0;
  double lambda = 1.0;
  double alpha = 1.0;
  double c_p = 1.0;
  double C_p = 1.0;

  /// Throws ValidationError unless p >= 1, m >= 1, lambda > 0, alpha in (0, 1].
  void validate() const;
  /// Conjugate exponent p / (p - 1); infinite for p = 1.
  double conjugate() const;
};

/// p! (11 rho)^p.
Bound jn_moment_bound(double rho, int p);

/// prod_k (1 - lambda rho_k)^{-1}. Throws ValidationError ("partition too
/// coarse") when some lambda rho_k >= 1.
double khasminskii_product(double lambda, std::span<const double> rhos);

/// 2^{1 + (22 lambda)^p w}.
Bound exp_vmoa_bound(double lambda, double p, double w);
/// log of exp_vmoa_bound, never saturating.
double log_exp_vmoa_bound(double lambda, double p, double w);

/// C_p Gamma(m (1 - 1/p) + 1) w^{m/p} for p > 1. For p = 1 the moment
/// estimate degenerates to the pathwise bound checked by v1_check; asking for
/// it here is a ValidationError.
double vmo_moment_bound(double m, double p, double w, double C_p);

/// 2^{1 + (22 seminorm lambda)^{1/alpha} tau}: exp_vmoa_bound with p = 1/alpha
/// and w = seminorm^{1/alpha} tau.
Bound rsde_exp_bound(double lambda, double alpha, double seminorm, double tau);

}  // namespace bmo::analysis

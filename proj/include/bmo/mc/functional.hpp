#pragma once
// Time integrals of a function of a sampled path, by left-point Riemann sums.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "bmo/simd/kernels.hpp"

namespace bmo::mc {

/// f(r, x). The named forms depend on x only and run through the SIMD kernels;
/// `custom` wraps an arbitrary callable.
class Integrand {
 public:
  enum class Kind { zero, one, identity, sign, custom };

  static Integrand zero() { return Integrand(Kind::zero); }
  static Integrand one() { return Integrand(Kind::one); }
  static Integrand identity() { return Integrand(Kind::identity); }
  /// sign(x) with sign(0) = 0.
  static Integrand sign() { return Integrand(Kind::sign); }
  static Integrand custom(std::function<double(double, double)> fn, std::string name = "custom");
  /// "zero", "one", "identity" (alias "x") or "sign".
  static Integrand by_name(const std::string& name);

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  double operator()(double r, double x) const;
  /// SIMD point map for the x-only forms that have one.
  std::optional<simd::PointMap> point_map() const noexcept;

 private:
  explicit Integrand(Kind kind);
  Kind kind_;
  std::string name_;
  std::function<double(double, double)> fn_;
};

/// Either the plain integral int_s^t f(r, X_r) dr or, with mesh n > 0, the
/// quadrature error int_s^t [f(r, X_r) - f(r, X_eta(r))] dr where
/// eta(r) = floor(n r) / n.
struct PathFunctional {
  Integrand f = Integrand::zero();
  std::size_t mesh = 0;

  static PathFunctional integral(Integrand f) { return {std::move(f), 0}; }
  static PathFunctional quadrature_error(Integrand f, std::size_t n) { return {std::move(f), n}; }
  bool is_quadrature_error() const noexcept { return mesh > 0; }
};

/// Fine steps per mesh cell when the fine step is dt; throws ValidationError
/// unless 1 / (n dt) is a positive integer (relative tolerance 1e-9).
std::size_t mesh_stride(std::size_t n, double dt);

/// Left-point Riemann sum of the functional over a path sampled at
/// s, s + dt, ..., s + m dt: x holds the m values X_{s + k dt}, k < m.
/// For a quadrature error, s must be a mesh point. `scratch` needs m entries.
double evaluate(const PathFunctional& functional, double s, double dt,
                std::span<const double> x, std::span<double> scratch);

}  // namespace bmo::mc

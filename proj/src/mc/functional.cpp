#include "bmo/mc/functional.hpp"

#include <cmath>

#include "bmo/error.hpp"

namespace bmo::mc {

Integrand::Integrand(Kind kind) : kind_(kind) {
  switch (kind) {
    case Kind::zero: name_ = "zero"; break;
    case Kind::one: name_ = "one"; break;
    case Kind::identity: name_ = "identity"; break;
    case Kind::sign: name_ = "sign"; break;
    case Kind::custom: name_ = "custom"; break;
  }
}

Integrand Integrand::custom(std::function<double(double, double)> fn, std::string name) {
  if (!fn) throw ValidationError("integrand: empty callable");
  Integrand f(Kind::custom);
  f.fn_ = std::move(fn);
  f.name_ = std::move(name);
  return f;
}

Integrand Integrand::by_name(const std::string& name) {
  if (name == "zero") return zero();
  if (name == "one") return one();
  if (name == "identity" || name == "x") return identity();
  if (name == "sign") return sign();
  throw ValidationError("unknown integrand '" + name + "' (expected zero, one, identity or sign)");
}

double Integrand::operator()(double r, double x) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::one: return 1.0;
    case Kind::identity: return x;
    case Kind::sign: return static_cast<double>(x > 0.0) - static_cast<double>(x < 0.0);
    case Kind::custom: return fn_(r, x);
  }
  return 0.0;
}

std::optional<simd::PointMap> Integrand::point_map() const noexcept {
  if (kind_ == Kind::identity) return simd::PointMap::identity;
  if (kind_ == Kind::sign) return simd::PointMap::sign;
  return std::nullopt;
}

std::size_t mesh_stride(std::size_t n, double dt) {
  if (n == 0 || !(dt > 0.0)) throw ValidationError("mesh_stride: need n >= 1 and dt > 0");
  const double ratio = 1.0 / (static_cast<double>(n) * dt);
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::fabs(ratio - rounded) > 1e-9 * rounded)
    throw ValidationError("fine step does not divide the mesh 1/" + std::to_string(n));
  return static_cast<std::size_t>(rounded);
}

double evaluate(const PathFunctional& functional, double s, double dt,
                std::span<const double> x, std::span<double> scratch) {
  const std::size_t m = x.size();
  if (scratch.size() < m) throw ValidationError("evaluate: scratch too small");
  const auto& f = functional.f;
  const auto map = f.point_map();
  const auto& k = simd::kernels();
  auto out = scratch.first(m);

  if (!functional.is_quadrature_error()) {
    switch (f.kind()) {
      case Integrand::Kind::zero: return 0.0;
      case Integrand::Kind::one: return static_cast<double>(m) * dt;
      case Integrand::Kind::identity: return k.blocked_sum(x.data(), m) * dt;
      case Integrand::Kind::sign: {
        if (m == 0) return 0.0;
        // sgn(x_i) - sgn(x_0) summed, plus m sgn(x_0); all terms are integers.
        k.frozen_diff(x.data(), m, m, *map, out.data());
        return (k.blocked_sum(out.data(), m) + static_cast<double>(m) * f(s, x[0])) * dt;
      }
      case Integrand::Kind::custom:
        for (std::size_t i = 0; i < m; ++i) out[i] = f(s + static_cast<double>(i) * dt, x[i]);
        return k.blocked_sum(out.data(), m) * dt;
    }
    return 0.0;
  }

  const std::size_t n = functional.mesh;
  const std::size_t stride = mesh_stride(n, dt);
  const double cells = s * static_cast<double>(n);
  if (std::fabs(cells - std::round(cells)) > 1e-9 * std::max(1.0, cells))
    throw ValidationError("quadrature error: start time must be a mesh point");
  if (f.kind() == Integrand::Kind::zero || f.kind() == Integrand::Kind::one) return 0.0;
  if (map) {
    k.frozen_diff(x.data(), m, stride, *map, out.data());
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t anchor = stride * (i / stride);
      const double r = s + static_cast<double>(i) * dt;
      out[i] = f(r, x[i]) - f(r, x[anchor]);
    }
  }
  return k.blocked_sum(out.data(), m) * dt;
}

}  // namespace bmo::mc

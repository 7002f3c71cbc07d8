#include "bmo/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace bmo::simd {
namespace {

inline double sgn(double v) {
  return static_cast<double>(v > 0.0) - static_cast<double>(v < 0.0);
}

inline double apply(PointMap map, double v) {
  return map == PointMap::sign ? sgn(v) : v;
}

inline double pow_small(double a, int m) {
  double r = a;
  for (int k = 1; k < m; ++k) r = r * a;
  return r;
}

template <class Term>
double lane_sum(std::size_t n, Term term) {
  double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    l0 = l0 + term(i);
    l1 = l1 + term(i + 1);
    l2 = l2 + term(i + 2);
    l3 = l3 + term(i + 3);
  }
  double s = (l0 + l1) + (l2 + l3);
  for (; i < n; ++i) s = s + term(i);
  return s;
}

double blocked_sum(const double* x, std::size_t n) {
  return lane_sum(n, [x](std::size_t i) { return x[i]; });
}

double blocked_abs_pow_sum(const double* x, std::size_t n, int m) {
  return lane_sum(n, [x, m](std::size_t i) { return pow_small(std::fabs(x[i]), m); });
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

void scale(double* x, std::size_t n, double a) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] * a;
}

void clamp(double* x, std::size_t n, double lo, double hi) {
  for (std::size_t i = 0; i < n; ++i) x[i] = std::min(std::max(x[i], lo), hi);
}

double sign_shift_diff_sum(const double* x, std::size_t n, double shift) {
  return lane_sum(n, [x, shift](std::size_t i) { return sgn(x[i] + shift) - sgn(x[i]); });
}

void frozen_diff(const double* x, std::size_t n, std::size_t stride, PointMap map,
                 double* out) {
  for (std::size_t begin = 0; begin < n; begin += stride) {
    const double anchor = apply(map, x[begin]);
    const std::size_t end = std::min(n, begin + stride);
    for (std::size_t i = begin; i < end; ++i) out[i] = apply(map, x[i]) - anchor;
  }
}

constexpr KernelTable kTable{Isa::scalar,        blocked_sum, blocked_abs_pow_sum, max_abs,
                             scale,              clamp,       sign_shift_diff_sum,
                             frozen_diff};

}  // namespace

namespace detail {
const KernelTable& scalar_table() noexcept { return kTable; }
}  // namespace detail

}  // namespace bmo::simd

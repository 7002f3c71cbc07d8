// Compiled with -mavx2 and only entered after a runtime CPU check.
#include "bmo/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace bmo::simd {
namespace {

inline __m256d vsgn(__m256d v) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d pos = _mm256_and_pd(_mm256_cmp_pd(v, zero, _CMP_GT_OQ), one);
  const __m256d neg = _mm256_and_pd(_mm256_cmp_pd(v, zero, _CMP_LT_OQ), one);
  return _mm256_sub_pd(pos, neg);
}

inline __m256d vabs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

inline double sgn(double v) {
  return static_cast<double>(v > 0.0) - static_cast<double>(v < 0.0);
}

inline double pow_small(double a, int m) {
  double r = a;
  for (int k = 1; k < m; ++k) r = r * a;
  return r;
}

inline double combine(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double blocked_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = combine(acc);
  for (; i < n; ++i) s = s + x[i];
  return s;
}

double blocked_abs_pow_sum(const double* x, std::size_t n, int m) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = vabs(_mm256_loadu_pd(x + i));
    __m256d r = a;
    for (int k = 1; k < m; ++k) r = _mm256_mul_pd(r, a);
    acc = _mm256_add_pd(acc, r);
  }
  double s = combine(acc);
  for (; i < n; ++i) s = s + pow_small(std::fabs(x[i]), m);
  return s;
}

double max_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(vabs(_mm256_loadu_pd(x + i)), acc);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

void scale(double* x, std::size_t n, double a) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
  for (; i < n; ++i) x[i] = x[i] * a;
}

void clamp(double* x, std::size_t n, double lo, double hi) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  // Operand order mirrors std::min(std::max(v, lo), hi) including signed zeros.
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_max_pd(vlo, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(x + i, _mm256_min_pd(vhi, v));
  }
  for (; i < n; ++i) x[i] = std::min(std::max(x[i], lo), hi);
}

double sign_shift_diff_sum(const double* x, std::size_t n, double shift) {
  const __m256d vs = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_sub_pd(vsgn(_mm256_add_pd(v, vs)), vsgn(v)));
  }
  double s = combine(acc);
  for (; i < n; ++i) s = s + (sgn(x[i] + shift) - sgn(x[i]));
  return s;
}

void frozen_diff(const double* x, std::size_t n, std::size_t stride, PointMap map,
                 double* out) {
  const bool use_sign = map == PointMap::sign;
  for (std::size_t begin = 0; begin < n; begin += stride) {
    const double anchor = use_sign ? sgn(x[begin]) : x[begin];
    const __m256d va = _mm256_set1_pd(anchor);
    const std::size_t end = std::min(n, begin + stride);
    std::size_t i = begin;
    for (; i + 4 <= end; i += 4) {
      __m256d v = _mm256_loadu_pd(x + i);
      if (use_sign) v = vsgn(v);
      _mm256_storeu_pd(out + i, _mm256_sub_pd(v, va));
    }
    for (; i < end; ++i) out[i] = (use_sign ? sgn(x[i]) : x[i]) - anchor;
  }
}

constexpr KernelTable kTable{Isa::avx2,          blocked_sum, blocked_abs_pow_sum, max_abs,
                             scale,              clamp,       sign_shift_diff_sum,
                             frozen_diff};

}  // namespace

namespace detail {
const KernelTable& avx2_table() noexcept { return kTable; }
}  // namespace detail

}  // namespace bmo::simd

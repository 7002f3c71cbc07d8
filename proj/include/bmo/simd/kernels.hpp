#pragma once
// Data-parallel inner loops of the Monte Carlo engine.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime. The scalar versions fix the accumulation order
// (four interleaved lanes, combined as (l0 + l1) + (l2 + l3), then the tail in
// index order) so that the vector versions reproduce them bit for bit.

#include <cstddef>
#include <span>

namespace bmo::simd {

enum class Isa { scalar, avx2 };

/// Which pointwise map a frozen-mesh difference kernel applies.
enum class PointMap { identity, sign };

struct KernelTable {
  Isa isa;
  /// Sum of x in the four-lane blocked order.
  double (*blocked_sum)(const double* x, std::size_t n);
  /// Sum of |x|^m for m in 1..4, four-lane blocked order.
  double (*blocked_abs_pow_sum)(const double* x, std::size_t n, int m);
  double (*max_abs)(const double* x, std::size_t n);
  /// x *= a.
  void (*scale)(double* x, std::size_t n, double a);
  /// x = clamp(x, lo, hi).
  void (*clamp)(double* x, std::size_t n, double lo, double hi);
  /// Sum over i of sgn(x[i] + shift) - sgn(x[i]) with sgn(0) = 0.
  double (*sign_shift_diff_sum)(const double* x, std::size_t n, double shift);
  /// out[i] = F(x[i]) - F(x[stride * (i / stride)]).
  void (*frozen_diff)(const double* x, std::size_t n, std::size_t stride,
                      PointMap map, double* out);
};

bool isa_available(Isa isa) noexcept;
const char* isa_name(Isa isa) noexcept;

/// Table for an explicit ISA; throws std::runtime_error if the CPU or build
/// lacks it.
const KernelTable& kernels_for(Isa isa);

/// Table picked once per process: AVX2 when the CPU supports it, unless the
/// environment variable BMOFORGE_SIMD is set to "scalar".
const KernelTable& kernels();

// Convenience wrappers over the active table.
inline double blocked_sum(std::span<const double> x) {
  return kernels().blocked_sum(x.data(), x.size());
}
inline double blocked_abs_pow_sum(std::span<const double> x, int m) {
  return kernels().blocked_abs_pow_sum(x.data(), x.size(), m);
}
inline double max_abs(std::span<const double> x) {
  return kernels().max_abs(x.data(), x.size());
}
inline void scale(std::span<double> x, double a) {
  kernels().scale(x.data(), x.size(), a);
}
inline void clamp(std::span<double> x, double lo, double hi) {
  kernels().clamp(x.data(), x.size(), lo, hi);
}
inline double sign_shift_diff_sum(std::span<const double> x, double shift) {
  return kernels().sign_shift_diff_sum(x.data(), x.size(), shift);
}
inline void frozen_diff(std::span<const double> x, std::size_t stride,
                        PointMap map, std::span<double> out) {
  kernels().frozen_diff(x.data(), x.size(), stride, map, out.data());
}

namespace detail {
const KernelTable& scalar_table() noexcept;
#if defined(BMO_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif
}  // namespace detail

}  // namespace bmo::simd

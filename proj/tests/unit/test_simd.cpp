#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "bmo/simd/kernels.hpp"

using namespace bmo::simd;

namespace {

std::vector<double> sample(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> z;
  std::vector<double> x(n);
  for (auto& v : x) v = z(eng);
  // exact zeros of both signs exercise sgn(0) = 0
  if (n > 3) x[1] = 0.0;
  if (n > 5) x[4] = -0.0;
  return x;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

// Four interleaved lanes, (l0 + l1) + (l2 + l3), then the tail.
double reference_blocked(const std::vector<double>& x) {
  double l[4] = {0, 0, 0, 0};
  const std::size_t body = x.size() / 4 * 4;
  for (std::size_t i = 0; i < body; ++i) l[i % 4] += x[i];
  double s = (l[0] + l[1]) + (l[2] + l[3]);
  for (std::size_t i = body; i < x.size(); ++i) s += x[i];
  return s;
}

const std::vector<std::size_t> kSizes{0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 63, 64, 65, 1000, 1023};

}  // namespace

TEST(ScalarKernels, BlockedSumMatchesReferenceOrder) {
  const auto& k = detail::scalar_table();
  for (std::size_t n : kSizes) {
    const auto x = sample(n, n);
    EXPECT_TRUE(same_bits(k.blocked_sum(x.data(), n), reference_blocked(x))) << n;
  }
}

TEST(ScalarKernels, AbsPowAndMax) {
  const auto& k = detail::scalar_table();
  const std::vector<double> x{-2.0, 1.0, 0.5, -0.5, 3.0};
  EXPECT_DOUBLE_EQ(k.blocked_abs_pow_sum(x.data(), x.size(), 1), 7.0);
  EXPECT_DOUBLE_EQ(k.blocked_abs_pow_sum(x.data(), x.size(), 2), 4 + 1 + 0.25 + 0.25 + 9);
  EXPECT_DOUBLE_EQ(k.blocked_abs_pow_sum(x.data(), x.size(), 3), 8 + 1 + 0.125 + 0.125 + 27);
  EXPECT_DOUBLE_EQ(k.blocked_abs_pow_sum(x.data(), x.size(), 4), 16 + 1 + 0.0625 + 0.0625 + 81);
  EXPECT_DOUBLE_EQ(k.max_abs(x.data(), x.size()), 3.0);
  EXPECT_EQ(k.max_abs(x.data(), 0), 0.0);
}

TEST(ScalarKernels, SignShiftDiff) {
  const auto& k = detail::scalar_table();
  const std::vector<double> x{-0.3, -0.1, 0.0, 0.2};
  // shift 0.15: sgn(-0.15)-sgn(-0.3)=0, sgn(0.05)-sgn(-0.1)=2, sgn(0.15)-0=1, 0
  EXPECT_DOUBLE_EQ(k.sign_shift_diff_sum(x.data(), x.size(), 0.15), 3.0);
  EXPECT_DOUBLE_EQ(k.sign_shift_diff_sum(x.data(), x.size(), 0.0), 0.0);
}

TEST(ScalarKernels, FrozenDiff) {
  const auto& k = detail::scalar_table();
  const std::vector<double> x{1, 2, 3, -4, 5, 6};
  std::vector<double> out(x.size());
  k.frozen_diff(x.data(), x.size(), 2, PointMap::identity, out.data());
  EXPECT_EQ(out, (std::vector<double>{0, 1, 0, -7, 0, 1}));
  k.frozen_diff(x.data(), x.size(), 2, PointMap::sign, out.data());
  EXPECT_EQ(out, (std::vector<double>{0, 0, 0, -2, 0, 0}));
}

TEST(ScalarKernels, ScaleAndClamp) {
  const auto& k = detail::scalar_table();
  std::vector<double> x{-3, -0.5, 0.25, 2, INFINITY};
  k.clamp(x.data(), x.size(), -1, 1);
  EXPECT_EQ(x, (std::vector<double>{-1, -0.5, 0.25, 1, 1}));
  k.scale(x.data(), x.size(), 2.0);
  EXPECT_EQ(x, (std::vector<double>{-2, -1, 0.5, 2, 2}));
}

TEST(Dispatch, ActiveTableIsAvailable) {
  EXPECT_TRUE(isa_available(Isa::scalar));
  EXPECT_TRUE(isa_available(kernels().isa));
  EXPECT_EQ(kernels_for(Isa::scalar).isa, Isa::scalar);
}

#if defined(BMO_HAVE_AVX2)

class Avx2Equivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!isa_available(Isa::avx2)) GTEST_SKIP() << "CPU lacks AVX2";
  }
  const KernelTable& s = detail::scalar_table();
  const KernelTable& v = detail::avx2_table();
};

TEST_F(Avx2Equivalence, Reductions) {
  for (std::size_t n : kSizes) {
    const auto x = sample(n, 100 + n);
    EXPECT_TRUE(same_bits(s.blocked_sum(x.data(), n), v.blocked_sum(x.data(), n))) << n;
    for (int m = 1; m <= 4; ++m)
      EXPECT_TRUE(same_bits(s.blocked_abs_pow_sum(x.data(), n, m), v.blocked_abs_pow_sum(x.data(), n, m)))
          << n << " m=" << m;
    EXPECT_TRUE(same_bits(s.max_abs(x.data(), n), v.max_abs(x.data(), n))) << n;
    for (double shift : {0.0, 0.05, -0.4, 1e-300})
      EXPECT_TRUE(same_bits(s.sign_shift_diff_sum(x.data(), n, shift), v.sign_shift_diff_sum(x.data(), n, shift)))
          << n << " shift=" << shift;
  }
}

TEST_F(Avx2Equivalence, ElementwiseMaps) {
  for (std::size_t n : kSizes) {
    const auto x = sample(n, 200 + n);
    auto a = x, b = x;
    s.scale(a.data(), n, -1.7);
    v.scale(b.data(), n, -1.7);
    for (std::size_t i = 0; i < n; ++i) EXPECT_TRUE(same_bits(a[i], b[i]));
    s.clamp(a.data(), n, -0.5, 0.75);
    v.clamp(b.data(), n, -0.5, 0.75);
    for (std::size_t i = 0; i < n; ++i) EXPECT_TRUE(same_bits(a[i], b[i]));
    for (std::size_t stride : {1u, 3u, 4u, 16u})
      for (PointMap map : {PointMap::identity, PointMap::sign}) {
        std::vector<double> oa(n), ob(n);
        s.frozen_diff(x.data(), n, stride, map, oa.data());
        v.frozen_diff(x.data(), n, stride, map, ob.data());
        for (std::size_t i = 0; i < n; ++i) EXPECT_TRUE(same_bits(oa[i], ob[i])) << n << " " << stride;
      }
  }
}

TEST_F(Avx2Equivalence, SignedZerosAndNonFinite) {
  const std::vector<double> x{-0.0, 0.0, -0.0, 0.0, INFINITY, -INFINITY, 1e-320, -1e-320, 0.0};
  EXPECT_TRUE(same_bits(s.blocked_sum(x.data(), 4), v.blocked_sum(x.data(), 4)));
  EXPECT_TRUE(same_bits(s.max_abs(x.data(), x.size()), v.max_abs(x.data(), x.size())));
  for (double shift : {0.0, -0.0, 1e-320})
    EXPECT_TRUE(same_bits(s.sign_shift_diff_sum(x.data(), x.size(), shift),
                          v.sign_shift_diff_sum(x.data(), x.size(), shift)));
  std::vector<double> oa(x.size()), ob(x.size());
  s.frozen_diff(x.data(), x.size(), 2, PointMap::sign, oa.data());
  v.frozen_diff(x.data(), x.size(), 2, PointMap::sign, ob.data());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_TRUE(same_bits(oa[i], ob[i])) << i;
}

#endif

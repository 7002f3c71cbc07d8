#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "bmo/error.hpp"
#include "bmo/mc/ensemble.hpp"
#include "bmo/mc/estimators.hpp"
#include "bmo/mc/functional.hpp"
#include "bmo/mc/rate_fit.hpp"
#include "bmo/mc/rng.hpp"

using namespace bmo;
using namespace bmo::mc;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Ordinary least squares of y on x, slope only.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST(Rng, DeriveSeedSeparatesIndices) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(5, 3, 4), derive_seed(derive_seed(5, 3), 4));
  static_assert(splitmix64(0) == 0xE220A8397B1DCDAFull);
}

TEST(Ensemble, TerminalVariance) {
  const std::size_t n = 20000;
  const double horizon = 2.0;
  const auto e = brownian_paths(n, 8, 1, horizon, 17);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = e.path(i);
    const double b = std::accumulate(p.begin(), p.end(), 0.0);
    sq[i] = b * b;
  }
  const auto m = mean_estimate(sq);
  EXPECT_NEAR(m.value, horizon, 3 * m.std_error);
}

TEST(Ensemble, Lag1CorrelationVanishes) {
  const std::size_t n = 5000, steps = 16;
  const auto e = brownian_paths(n, steps, 1, 1.0, 23);
  const double dt = e.shape().dt();
  std::vector<double> prod;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = e.path(i);
    for (std::size_t k = 0; k + 1 < steps; ++k) prod.push_back(p[k] * p[k + 1] / dt);
  }
  const auto m = mean_estimate(prod);
  EXPECT_NEAR(m.value, 0.0, 3 * m.std_error);
}

TEST(Ensemble, Deterministic) {
  const auto a = brownian_paths(50, 10, 2, 1.0, 99);
  const auto b = brownian_paths(50, 10, 2, 1.0, 99);
  ASSERT_EQ(a.increments().size(), 1000u);
  EXPECT_TRUE(std::equal(a.increments().begin(), a.increments().end(), b.increments().begin()));
  const auto c = brownian_paths(50, 10, 2, 1.0, 100);
  EXPECT_FALSE(std::equal(a.increments().begin(), a.increments().end(), c.increments().begin()));
}

TEST(Ensemble, StreamedMatchesMaterialized) {
  EnsembleShape sh{30, 12, 1, 1.0, 4};
  const auto s = PathEnsemble::streamed(sh);
  const auto m = PathEnsemble::materialized(sh, kDefaultMaxBytes, 4);
  std::vector<double> buf(12);
  for (std::size_t i = 0; i < 30; ++i) {
    s.fill_increments(i, buf);
    const auto p = m.path(i);
    EXPECT_TRUE(std::equal(buf.begin(), buf.end(), p.begin()));
  }
}

TEST(Ensemble, Limits) {
  EXPECT_THROW(brownian_paths(1000, 1000, 1, 1.0, 1, 1000), ResourceLimitError);
  EXPECT_THROW(brownian_paths(0, 10, 1, 1.0, 1), ValidationError);
  EXPECT_EQ(brownian_paths(2, 4, 1, 1.0, 9).metadata()["seed"], 9);
}

TEST(ConditionalMoment, ZeroAndOne) {
  ConditionalMomentOptions o;
  o.n_inner = 50;
  o.dt = 1.0 / 64;
  const std::vector<double> xs{-1.0, 0.0, 0.5};
  const auto z = markov_conditional_moment(PathFunctional::integral(Integrand::zero()), 0.25, 0.75, xs, o, 1);
  EXPECT_EQ(z.estimate.value, 0.0);
  const auto one = markov_conditional_moment(PathFunctional::integral(Integrand::one()), 0.25, 0.75, xs, o, 1);
  EXPECT_NEAR(one.estimate.value, 0.5, 1e-12);
  EXPECT_EQ(one.estimate.std_error, 0.0);
}

TEST(ConditionalMoment, IntegratedBrownianOracle) {
  ConditionalMomentOptions o;
  o.n_inner = 10000;
  o.dt = 1.0 / 4096;
  const std::vector<double> x0{0.0};
  const auto r = markov_conditional_moment(PathFunctional::integral(Integrand::identity()), 0.0, 1.0, x0, o, 2024);
  // int_0^1 W ~ N(0, 1/3), E|N(0, s^2)| = s sqrt(2 / pi)
  const double oracle = std::sqrt(2.0 / (3.0 * M_PI));
  EXPECT_NEAR(r.estimate.value, oracle, 3 * r.estimate.std_error);
  EXPECT_NEAR(oracle, 0.4607, 1e-4);
}

TEST(ConditionalMoment, ProxyPicksMaximum) {
  ConditionalMomentOptions o;
  o.n_inner = 200;
  o.dt = 1.0 / 32;
  const std::vector<double> xs{0.0, 3.0, -0.1};
  const auto r = markov_conditional_moment(PathFunctional::integral(Integrand::identity()), 0.0, 1.0, xs, o, 3);
  ASSERT_EQ(r.per_outer.size(), 3u);
  EXPECT_EQ(r.selected_outer, 1u);
  EXPECT_EQ(r.estimate.value, r.per_outer[1].value);
}

TEST(ConditionalMoment, JobsInvariant) {
  ConditionalMomentOptions a, b;
  a.n_inner = b.n_inner = 100;
  a.dt = b.dt = 1.0 / 64;
  b.jobs = 8;
  const std::vector<double> xs{0.0, 0.3, -0.2, 1.0};
  const auto f = PathFunctional::quadrature_error(Integrand::sign(), 8);
  const auto ra = markov_conditional_moment(f, 0.25, 1.0, xs, a, 5);
  const auto rb = markov_conditional_moment(f, 0.25, 1.0, xs, b, 5);
  EXPECT_EQ(ra.estimate.value, rb.estimate.value);
  EXPECT_EQ(ra.estimate.std_error, rb.estimate.std_error);
}

TEST(RhoGrid, ZeroAndOne) {
  RhoGridOptions o;
  o.inner.n_inner = 20;
  o.inner.dt = 1.0 / 64;
  const std::vector<double> grid{0.0, 0.25, 0.5, 1.0};
  const auto z = empirical_rho_grid(PathFunctional::integral(Integrand::zero()), grid, 4, o, 1);
  const auto one = empirical_rho_grid(PathFunctional::integral(Integrand::one()), grid, 4, o, 1);
  for (std::size_t s = 0; s < grid.size(); ++s)
    for (std::size_t t = s; t < grid.size(); ++t) {
      EXPECT_EQ(z.value(s, t), 0.0);
      EXPECT_NEAR(one.value(s, t), grid[t] - grid[s], 1e-12);
    }
  EXPECT_TRUE(one.monotone_flags.empty());
}

TEST(ExpMoment, ConstantSamples) {
  const std::vector<double> c(10, 0.7);
  const auto r = exp_moment(c, 2.0, 1e300);
  EXPECT_NEAR(r.estimate.value, std::exp(1.4), 1e-14);
  EXPECT_EQ(r.truncation_hit_rate, 0.0);
  const auto t = exp_moment(c, 2.0, 3.0);
  EXPECT_EQ(t.estimate.value, 3.0);
  EXPECT_EQ(t.truncation_hit_rate, 1.0);
}

TEST(ExpMoment, AbsNormalOracle) {
  NormalStream z(77);
  std::vector<double> s(200000);
  for (auto& x : s) x = std::abs(z.next());
  const auto r = exp_moment(s, 0.5, 1e300);
  const double oracle = 2.0 * std::exp(0.125) * normal_cdf(0.5);
  EXPECT_NEAR(oracle, 1.5670, 1e-4);
  EXPECT_NEAR(r.estimate.value, oracle, 3 * r.estimate.std_error);
}

TEST(ExpMoment, Errors) {
  EXPECT_THROW(exp_moment({}, 1.0, 10.0), ValidationError);
  const std::vector<double> one{1.0};
  EXPECT_THROW(exp_moment(one, 0.0, 10.0), ValidationError);
}

TEST(RateFit, ExactPowers) {
  const std::vector<double> ns{8, 16, 32, 64, 128};
  std::vector<double> inv, root;
  for (double n : ns) {
    inv.push_back(1.0 / n);
    root.push_back(1.0 / std::sqrt(n));
  }
  const auto a = rate_fit(ns, inv);
  EXPECT_NEAR(a.slope, 1.0, 1e-12);
  EXPECT_NEAR(a.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(a.slope_stderr, 0.0, 1e-10);
  EXPECT_NEAR(rate_fit(ns, root).slope, 0.5, 1e-12);
}

TEST(RateFit, LogCorrectedRate) {
  std::vector<double> ns, errs, lx, ly;
  for (double n = 8; n <= 512; n *= 2) {
    ns.push_back(n);
    errs.push_back(std::sqrt(std::log(n + 1) / n));
    lx.push_back(std::log(1.0 / n));
    ly.push_back(std::log(errs.back()));
  }
  const auto f = rate_fit(ns, errs);
  EXPECT_NEAR(f.slope, ols_slope(lx, ly), 1e-12);
  EXPECT_NEAR(f.slope, 0.3762, 5e-5);
}

TEST(RateFit, Validation) {
  const std::vector<double> two{8, 16}, e2{0.1, 0.05};
  EXPECT_THROW(rate_fit(two, e2), ValidationError);
  const std::vector<double> ns{8, 16, 32}, bad{0.1, 0.0, 0.01};
  EXPECT_THROW(rate_fit(ns, bad), ValidationError);
  const std::vector<double> same{8, 8, 8}, ok{0.1, 0.1, 0.1};
  EXPECT_THROW(rate_fit(same, ok), ValidationError);
}

TEST(Functional, MeshStride) {
  EXPECT_EQ(mesh_stride(8, 1.0 / 4096), 512u);
  EXPECT_THROW(mesh_stride(3, 1.0 / 4096), ValidationError);
}

TEST(Functional, EvaluateQuadratureError) {
  // x = 0, 1, 2, 3 on two cells of two fine steps: frozen at 0 and 2.
  const std::vector<double> x{0, 1, 2, 3};
  std::vector<double> scratch(4);
  const double dt = 0.25;
  const auto f = PathFunctional::quadrature_error(Integrand::identity(), 2);
  EXPECT_DOUBLE_EQ(evaluate(f, 0.0, dt, x, scratch), (0 + 1 + 0 + 1) * dt);
  EXPECT_DOUBLE_EQ(evaluate(PathFunctional::integral(Integrand::identity()), 0.0, dt, x, scratch), 6 * dt);
  const auto c = Integrand::custom([](double r, double y) { return r + y; });
  EXPECT_DOUBLE_EQ(c(0.5, 2.0), 2.5);
  EXPECT_THROW(Integrand::by_name("cosine"), ValidationError);
  EXPECT_EQ(Integrand::by_name("x").kind(), Integrand::Kind::identity);
}

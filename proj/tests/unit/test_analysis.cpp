#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bmo/analysis/bounds.hpp"
#include "bmo/analysis/checks.hpp"
#include "bmo/analysis/control.hpp"
#include "bmo/analysis/gamma.hpp"
#include "bmo/analysis/report.hpp"
#include "bmo/analysis/suite.hpp"
#include "bmo/error.hpp"

using namespace bmo;
using namespace bmo::analysis;
using filtration::GridMatrix;
using filtration::TransitionSpec;

namespace {

FiniteFilteredSpace fair(int depth) { return FiniteFilteredSpace::build(depth, 2, TransitionSpec::fair(2)); }

AdaptedProcess walk(const FiniteFilteredSpace& sp) {
  return AdaptedProcess::from_path(sp, [](std::span<const int> p) {
    double s = 0;
    for (int c : p) s += c == 0 ? 1.0 : -1.0;
    return s;
  });
}

AdaptedProcess linear(const FiniteFilteredSpace& sp, double slope) {
  std::vector<double> k(sp.depth() + 1);
  for (int i = 0; i <= sp.depth(); ++i) k[i] = slope * i;
  return AdaptedProcess::deterministic(sp, k);
}

}  // namespace

TEST(Gamma, MatchesStdTgamma) {
  for (double x : {0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.7, 10.0, 25.5, 50.0})
    EXPECT_NEAR(gamma_lanczos(x) / std::tgamma(x), 1.0, 1e-13) << x;
  for (double x : {0.3, 1.0, 7.25, 100.0, 170.5})
    EXPECT_NEAR(log_gamma_lanczos(x), std::lgamma(x), 1e-12 * std::max(1.0, std::abs(std::lgamma(x)))) << x;
  EXPECT_NEAR(gamma_lanczos(-0.5), -2.0 * std::sqrt(M_PI), 1e-12);
}

TEST(Bounds, JnMoment) {
  EXPECT_EQ(jn_moment_bound(0.0, 3).value, 0.0);
  EXPECT_NEAR(jn_moment_bound(0.1, 2).value, 2.42, 1e-14);
  EXPECT_DOUBLE_EQ(jn_moment_bound(1.0, 1).value, 11.0);
  const auto big = jn_moment_bound(1e100, 10);
  EXPECT_TRUE(big.saturated);
  EXPECT_EQ(big.value, std::numeric_limits<double>::max());
}

TEST(Bounds, KhasminskiiProduct) {
  const std::vector<double> half{0.5, 0.5};
  EXPECT_NEAR(khasminskii_product(0.5, half), 16.0 / 9.0, 1e-15);
  EXPECT_EQ(khasminskii_product(0.5, {}), 1.0);
  const std::vector<double> one{1.0};
  try {
    khasminskii_product(1.0, one);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("partition too coarse"), std::string::npos);
  }
}

TEST(Bounds, ExpVmoa) {
  EXPECT_DOUBLE_EQ(exp_vmoa_bound(0.7, 2.0, 0.0).value, 2.0);
  EXPECT_NEAR(exp_vmoa_bound(0.01, 2.0, 1.0).value, std::pow(2.0, 1.0484), 1e-12);
  EXPECT_NEAR(exp_vmoa_bound(0.01, 2.0, 1.0).value, 2.06823, 5e-6);
  EXPECT_TRUE(exp_vmoa_bound(10.0, 3.0, 1e6).saturated);
  EXPECT_NEAR(log_exp_vmoa_bound(10.0, 3.0, 1e6), (1.0 + std::pow(220.0, 3) * 1e6) * std::log(2.0), 1e-3);
}

TEST(Bounds, VmoMoment) {
  EXPECT_NEAR(vmo_moment_bound(2, 2, 1, 1), 1.0, 1e-13);
  EXPECT_NEAR(vmo_moment_bound(4, 2, 1, 1), 2.0, 1e-13);
  EXPECT_NEAR(vmo_moment_bound(2, 2, 4, 1), 4.0, 1e-13);
  EXPECT_THROW(vmo_moment_bound(2, 1, 1, 1), ValidationError);
}

TEST(Bounds, RsdeExp) {
  EXPECT_DOUBLE_EQ(rsde_exp_bound(0.3, 0.5, 0.0, 1.0).value, 2.0);
  EXPECT_NEAR(rsde_exp_bound(1.0 / 22.0, 1.0, 1.0, 1.0).value, 4.0, 1e-13);
  EXPECT_NEAR(rsde_exp_bound(0.01, 0.5, 1.0, 1.0).value, exp_vmoa_bound(0.01, 2.0, 1.0).value, 1e-13);
}

TEST(Bounds, ParametersValidate) {
  BoundParameters p;
  EXPECT_NO_THROW(p.validate());
  p.alpha = 1.5;
  EXPECT_THROW(p.validate(), ValidationError);
  p.alpha = 1.0;
  p.p = 3.0;
  EXPECT_DOUBLE_EQ(p.conjugate(), 1.5);
}

TEST(JnMoment, Examples) {
  const auto sp = fair(2);
  const auto c = jn_moment_check(sp, AdaptedProcess::constant(sp, 2.0), 0, 2);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.lhs, 0.0);
  EXPECT_EQ(c.rhs, 0.0);

  const auto w = jn_moment_check(sp, walk(sp), 0, 1);
  EXPECT_TRUE(w.holds);
  EXPECT_DOUBLE_EQ(w.lhs, 1.5);
  EXPECT_DOUBLE_EQ(w.rhs, 11.0);

  const auto d = jn_moment_check(sp, linear(sp, 1.0), 0, 2);
  EXPECT_TRUE(d.holds);
  EXPECT_DOUBLE_EQ(d.lhs, 4.0);
  EXPECT_DOUBLE_EQ(d.rhs, 968.0);
}

TEST(Khasminskii, Examples) {
  const auto sp = fair(2);
  const std::vector<int> cells{0, 1, 2};
  const auto z = khasminskii_check(sp, AdaptedProcess::constant(sp, 0.0), 0, 1.0, cells);
  EXPECT_TRUE(z.holds);
  EXPECT_DOUBLE_EQ(z.lhs, 1.0);
  EXPECT_DOUBLE_EQ(z.rhs, 1.0);

  const auto d = khasminskii_check(sp, linear(sp, 0.1), 0, 1.0, cells);
  EXPECT_TRUE(d.holds);
  EXPECT_NEAR(d.lhs, std::exp(0.2), 1e-14);
  EXPECT_NEAR(d.rhs, 1.0 / (0.9 * 0.9), 1e-14);
}

TEST(Khasminskii, BernoulliIncrements) {
  const auto sp = fair(3);
  const auto a = AdaptedProcess::from_path(sp, [](std::span<const int> p) {
    double s = 0;
    for (int c : p) s += c == 0 ? 0.2 : 0.0;
    return s;
  });
  // oracle: A_3 - A_0 ~ 0.2 Bin(3, 1/2), E e^{A_3} = ((1 + e^{0.2}) / 2)^3
  const std::vector<int> cells{0, 1, 2, 3};
  const auto r = khasminskii_check(sp, a, 0, 1.0, cells);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.lhs, std::pow((1.0 + std::exp(0.2)) / 2.0, 3), 1e-14);
}

TEST(Khasminskii, RejectsDecreasingA) {
  const auto sp = fair(2);
  const std::vector<int> cells{0, 2};
  EXPECT_THROW(khasminskii_check(sp, walk(sp), 0, 0.1, cells), ValidationError);
}

TEST(Maximal, Examples) {
  const auto sp = fair(2);
  const auto c = maximal_check(sp, AdaptedProcess::constant(sp, 1.0), 0, 2);
  EXPECT_TRUE(c.star.holds);
  EXPECT_EQ(c.four_rho.lhs, 0.0);

  const auto w = maximal_check(sp, walk(sp), 0, 2);
  EXPECT_TRUE(w.four_rho.holds);
  EXPECT_DOUBLE_EQ(w.four_rho.lhs, 1.5);
  EXPECT_DOUBLE_EQ(w.four_rho.rhs, 4.0);

  const auto v = linear(sp, 1.0);
  const auto vs = filtration::maximal_process(sp, v);
  EXPECT_DOUBLE_EQ(filtration::rho_exact(sp, vs, 0, 2), filtration::rho_exact(sp, v, 0, 2));
  EXPECT_TRUE(maximal_check(sp, v, 0, 2).star.holds);
}

TEST(Garsia, Examples) {
  const auto sp = fair(2);
  const std::vector<double> u0(4, 0.0), u1(4, 1.0), y{0.0};
  const auto c = garsia_check(sp, AdaptedProcess::constant(sp, 0.0), u0, y, 0, 1.0, 1.0);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.lhs, 0.0);
  EXPECT_EQ(c.rhs, 0.0);

  const auto w = garsia_check(sp, walk(sp), u1, y, 0, 1.0, 1.0);
  EXPECT_TRUE(w.holds);
  EXPECT_DOUBLE_EQ(w.lhs, 0.5);
  EXPECT_DOUBLE_EQ(w.rhs, 1.0);

  const auto big = garsia_check(sp, walk(sp), u1, y, 0, 1.0, 10.0);
  EXPECT_TRUE(big.holds);
  EXPECT_EQ(big.lhs, 0.0);
}

TEST(Garsia, DominationFailureIsReported) {
  const auto sp = fair(2);
  const std::vector<double> small(4, 0.1), y{0.0};
  EXPECT_THROW(garsia_check(sp, walk(sp), small, y, 0, 0.5, 0.5), HypothesisError);
}

TEST(Garsia, AdmissibilityOfY) {
  // X = 1 constant, Y = 0, U = 0: the first exit happens at s with a zero jump,
  // and the bound would read beta <= 0.
  const auto sp = fair(2);
  const auto x = AdaptedProcess::constant(sp, 1.0);
  const std::vector<double> y0{0.0, 0.0}, u0(4, 0.0);
  EXPECT_FALSE(garsia_y_admissible(sp, x, y0, 1, 0.5));
  EXPECT_THROW(garsia_check(sp, x, u0, y0, 1, 0.5, 0.5), HypothesisError);
  const std::vector<double> y1{1.0, 1.0};
  EXPECT_TRUE(garsia_y_admissible(sp, x, y1, 1, 0.5));
  EXPECT_TRUE(garsia_check(sp, x, u0, y1, 1, 0.5, 0.5).holds);
}

TEST(Energy, Examples) {
  const auto sp = fair(2);
  const auto z = energy_check(sp, AdaptedProcess::constant(sp, 0.0), 0, 0.0, 1);
  EXPECT_TRUE(z.holds);
  EXPECT_EQ(z.lhs, 0.0);

  const auto d = energy_check(sp, linear(sp, 1.0), 0, 2.0, 2);
  EXPECT_TRUE(d.holds);
  EXPECT_DOUBLE_EQ(d.lhs, 4.0);
  EXPECT_DOUBLE_EQ(d.rhs, 8.0);
  EXPECT_THROW(energy_check(sp, linear(sp, 1.0), 0, 1.0, 2), HypothesisError);
}

TEST(Energy, BernoulliIncrementsWithEnumeratedConstant) {
  const auto sp = fair(3);
  const auto a = AdaptedProcess::from_path(sp, [](std::span<const int> p) {
    double s = 0;
    for (int c : p) s += c == 0 ? 1.0 : 0.0;
    return s;
  });
  const double c = energy_constant(sp, a);
  EXPECT_GT(c, 0.0);
  EXPECT_TRUE(energy_check(sp, a, 0, c, 3).holds);
}

TEST(Control, PvarExamples) {
  GridMatrix one(2);
  one(0, 1) = 0.7;
  EXPECT_DOUBLE_EQ(pvar_control(one, 2.0).w(0, 1), 0.49);

  GridMatrix r(3);
  r(0, 1) = r(1, 2) = 1.0;
  r(0, 2) = 1.0;
  EXPECT_DOUBLE_EQ(pvar_control(r, 1.0).w(0, 2), 2.0);
  r(0, 2) = 2.0;
  EXPECT_DOUBLE_EQ(pvar_control(r, 2.0).w(0, 2), 4.0);
}

TEST(Control, VmoAlphaSeminorm) {
  const double dt = 0.25;
  GridMatrix zero(5), lin(5), root(5);
  for (int s = 0; s < 5; ++s)
    for (int t = s + 1; t < 5; ++t) {
      lin(s, t) = (t - s) * dt;
      root(s, t) = std::sqrt((t - s) * dt);
    }
  EXPECT_EQ(vmo_alpha_seminorm(zero, 0.5, dt), 0.0);
  EXPECT_NEAR(vmo_alpha_seminorm(lin, 1.0, dt), 1.0, 1e-15);
  EXPECT_NEAR(vmo_alpha_seminorm(root, 0.5, dt), 1.0, 1e-15);
}

TEST(Control, SuperadditiveAndDominating) {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(0, 1);
  const auto sp = fair(4);
  std::vector<double> vals(sp.node_count());
  for (auto& x : vals) x = u(eng);
  const auto data = filtration::oscillation_data(sp, AdaptedProcess(sp, vals));
  for (double p : {1.0, 1.5, 2.0}) {
    const auto ctl = pvar_control(data.rho, p);
    EXPECT_TRUE(w_superadditive_check(ctl).holds);
    EXPECT_TRUE(w_dominates_check(data.rho, ctl).holds);
    for (std::size_t s = 0; s < ctl.w.size(); ++s) EXPECT_EQ(ctl.w(s, s), 0.0);
  }
}

TEST(ExpVmoa, WalkHolds) {
  const auto sp = fair(2);
  EXPECT_TRUE(exp_vmoa_check(sp, walk(sp), 0.05, 2.0).holds);
}

TEST(V1, Examples) {
  const auto sp = fair(3);
  EXPECT_TRUE(v1_check(sp, AdaptedProcess::constant(sp, 3.0)).holds);
  EXPECT_EQ(v1_check(sp, AdaptedProcess::constant(sp, 3.0)).lhs, 0.0);
  EXPECT_TRUE(v1_check(sp, linear(sp, 1.0)).holds);
}

TEST(Report, ToleranceAndRatio) {
  EXPECT_DOUBLE_EQ(check_tolerance(2.0), 2e-9 + 1e-12);
  EXPECT_TRUE(make_report("x", 1.0 + 1e-10, 1.0).holds);
  EXPECT_FALSE(make_report("x", 1.0 + 1e-8, 1.0).holds);
  EXPECT_EQ(make_report("x", 0, 0).ratio(), 0.0);
  EXPECT_DOUBLE_EQ(make_report("x", 1, 0).ratio(), 1e12);
  const auto r = make_report("x", 0.5, 2.0, "atom 3");
  EXPECT_EQ(check_report_from_json(to_json(r)).witness, "atom 3");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Report, WorstCasePrefersViolations) {
  WorstCase w("x");
  w.offer(0.9, 1.0, "a");
  w.offer(2.0, 1.0, "b");
  w.offer(0.99, 1.0, "c");
  EXPECT_FALSE(w.result().holds);
  EXPECT_EQ(w.result().witness, "b");
}

TEST(Suite, SmallCorpusHasNoViolations) {
  CorpusOptions co;
  co.n_cases = 12;
  co.max_depth = 3;
  co.seed = 5;
  const auto corpus = make_corpus(co);
  SuiteOptions so;
  const auto reports = run_finite_suite(corpus, so);
  const auto summary = summarize(reports);
  EXPECT_GE(summary.size(), 15u);
  for (const auto& s : summary) {
    EXPECT_EQ(s.n_cases, 12u) << s.check;
    if (!s.informational) {
      EXPECT_EQ(s.violations, 0u) << s.check << " worst " << s.worst_case;
    }
  }
}

TEST(Suite, JobsDoNotChangeReports) {
  CorpusOptions co;
  co.n_cases = 6;
  co.max_depth = 3;
  const auto corpus = make_corpus(co);
  SuiteOptions a, b;
  b.jobs = 4;
  const auto ra = run_finite_suite(corpus, a), rb = run_finite_suite(corpus, b);
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    EXPECT_EQ(ra[i].report.lhs, rb[i].report.lhs);
    EXPECT_EQ(ra[i].report.rhs, rb[i].report.rhs);
    EXPECT_EQ(ra[i].report.witness, rb[i].report.witness);
  }
}

TEST(Corpus, CaseDependsOnSeedAndIndexOnly) {
  CorpusOptions co;
  co.seed = 3;
  const auto a = make_case(3, 7, co);
  co.n_cases = 10;
  const auto b = make_corpus(co)[7];
  EXPECT_EQ(a.id, b.id);
  ASSERT_EQ(a.v.size(), b.v.size());
  for (std::size_t i = 0; i < a.v.size(); ++i) EXPECT_EQ(a.v[i], b.v[i]);
}

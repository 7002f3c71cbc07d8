#include "bmo/analysis/suite.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <random>

#include "bmo/parallel.hpp"

namespace bmo::analysis {

using filtration::AdaptedProcess;
using filtration::NodeId;

namespace {

class Families {
 public:
  void offer(const CheckReport& r) { slot(r.check).offer(r); }

  // Runs fn; anything it throws becomes a failing report of family `name`.
  void guard(const std::string& name, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      CheckReport r = make_report(name, 1.0, 0.0, std::string("exception: ") + e.what());
      r.holds = false;
      slot(name).offer(r);
    }
  }

  std::vector<CaseReport> take(const std::string& case_id) const {
    std::vector<CaseReport> out;
    for (const auto& [name, worst] : families_) out.push_back({case_id, worst.result()});
    return out;
  }

 private:
  WorstCase& slot(const std::string& name) {
    for (auto& [n, w] : families_)
      if (n == name) return w;
    families_.emplace_back(name, WorstCase(name));
    return families_.back().second;
  }
  std::vector<std::pair<std::string, WorstCase>> families_;
};

double leaf_range_of(const FiniteFilteredSpace& space, const AdaptedProcess& x,
                     std::span<const double> y, int s) {
  double r = 0.0;
  for (int k = s; k <= space.depth(); ++k)
    for (NodeId n = space.level_begin(k); n < space.level_end(k); ++n)
      r = std::max(r, std::fabs(x[n] - y[space.ancestor_at(n, s) - space.level_begin(s)]));
  return r;
}

}  // namespace

std::vector<CaseReport> run_case(const FiniteCase& c, const SuiteOptions& options) {
  const auto& space = c.space;
  const auto& v = c.v;
  const auto& a = c.a;
  const int tau = space.depth();
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Families fam;

  filtration::OscillationData data;
  fam.guard("oscillation", [&] { data = filtration::oscillation_data(space, v, options.rho); });
  if (data.rho.size() == 0) return fam.take(c.id);

  fam.guard("jn_moment", [&] {
    for (int r = 0; r <= tau; ++r)
      for (int p : options.moment_orders) fam.offer(jn_moment_check(space, v, r, p, options.rho));
  });

  fam.guard("maximal_11rho", [&] {
    for (int s = 0; s <= tau; ++s)
      for (int t = s; t <= tau; ++t) {
        const auto m = maximal_check(space, v, s, t, options.rho);
        fam.offer(m.star);
        fam.offer(m.four_rho);
      }
  });

  fam.guard("garsia", [&] {
    for (int s = 0; s <= tau; ++s) {
      const double rho = filtration::rho_exact(space, v, s, tau, {true, options.rho.cap});
      const std::size_t leaves = space.level_size(tau);
      std::vector<std::vector<double>> us{std::vector<double>(leaves, rho)};
      std::vector<double> noisy(leaves);
      for (auto& x : noisy) x = rho * (1.0 + unit(rng));
      us.push_back(std::move(noisy));

      const auto vs = v.level_values(space, s);
      std::vector<double> left(vs.size()), zero(vs.size(), 0.0);
      for (std::size_t i = 0; i < vs.size(); ++i)
        left[i] = v.left_limit(space, space.level_begin(s) + i);
      for (const auto& y : {vs, left, zero}) {
        const double range = leaf_range_of(space, v, y, s);
        const double unit_len = range > 0.0 ? range : 1.0;
        for (const auto& [fa, fb] : std::initializer_list<std::pair<double, double>>{
                 {0.25, 0.25}, {0.25, 0.5}, {0.5, 0.25}, {1.0 / 3, 1.0 / 3}})
          for (const auto& u : us)
            if (garsia_y_admissible(space, v, y, s, fa * unit_len))
              fam.offer(garsia_check(space, v, u, y, s, fa * unit_len, fb * unit_len, options.rho.cap));
      }
    }
  });

  fam.guard("energy", [&] {
    const double c_min = energy_constant(space, a);
    for (double c_val : {c_min, 1.5 * c_min})
      for (int s = 0; s <= tau; ++s)
        for (int p : options.moment_orders) fam.offer(energy_check(space, a, s, c_val, p));
  });

  fam.guard("khasminskii", [&] {
    std::vector<std::vector<int>> partitions;
    std::vector<int> unit_cells(static_cast<std::size_t>(tau) + 1);
    for (int k = 0; k <= tau; ++k) unit_cells[k] = k;
    partitions.push_back(unit_cells);
    if (tau >= 2) partitions.push_back({0, tau});
    if (tau >= 3) partitions.push_back({0, tau / 2, tau});
    if (tau == 0) return;
    for (const auto& part : partitions) {
      double rho_max = 0.0;
      for (std::size_t k = 1; k < part.size(); ++k)
        rho_max = std::max(rho_max, filtration::rho_exact(space, a, part[k - 1], part[k],
                                                          {false, options.rho.cap}));
      for (double f : options.lambda_fractions) {
        const double lambda = rho_max > 0.0 ? f / rho_max : f;
        for (int r = 0; r <= tau; ++r)
          fam.offer(khasminskii_check(space, a, r, lambda, part, options.rho.cap));
      }
    }
  });

  fam.guard("exp_vmoa", [&] {
    const double rho = std::max(data.rho(0, tau), 1e-9);
    std::vector<double> lambdas;
    for (double f : options.lambda_fractions) lambdas.push_back(f / rho);
    lambdas.push_back(2.0 / rho);
    for (double p : options.control_exponents)
      for (double lambda : lambdas) fam.offer(exp_vmoa_check(space, v, lambda, p, options.rho));
  });

  fam.guard("v1", [&] { fam.offer(v1_check(space, v, options.rho)); });

  fam.guard("vmo_moment", [&] {
    for (double m : {1.0, 2.0, 4.0}) fam.offer(vmo_moment_check(space, v, 0, tau, m, 2.0, 1.0, options.rho));
  });

  fam.guard("jump_equals_kappa", [&] { fam.offer(jump_kappa_check(space, v)); });
  fam.guard("kappa_le_rho", [&] { fam.offer(kappa_rho_check(space, v, options.rho)); });
  fam.guard("stopping_pairs_2b3c", [&] { fam.offer(stopping_pair_check(space, v, options.rho)); });
  fam.guard("rho_monotone", [&] { fam.offer(rho_monotone_check(data.rho)); });
  fam.guard("rho_triangle", [&] { fam.offer(rho_triangle_check(data.rho)); });
  fam.guard("w_superadditive", [&] {
    for (double p : options.control_exponents) {
      const auto control = pvar_control(data.rho, p);
      fam.offer(w_superadditive_check(control));
      fam.offer(w_dominates_check(data.rho, control));
      fam.offer(vcontrol_check(space, v, control));
    }
  });
  fam.guard("rho_routes_agree", [&] {
    fam.offer(rho_routes_check(space, v, options.rho.cap));
    fam.offer(rho_routes_check(space, a, options.rho.cap));
  });
  fam.guard("tower_property", [&] {
    fam.offer(tower_check(space, v.level_values(space, tau)));
  });

  return fam.take(c.id);
}

std::vector<CaseReport> run_finite_suite(std::span<const FiniteCase> corpus,
                                         const SuiteOptions& options) {
  std::vector<std::vector<CaseReport>> per_case(corpus.size());
  parallel_for(corpus.size(), options.jobs,
               [&](std::size_t i) { per_case[i] = run_case(corpus[i], options); });
  std::vector<CaseReport> out;
  for (auto& reports : per_case)
    for (auto& r : reports) out.push_back(std::move(r));
  return out;
}

std::vector<CheckSummary> summarize(std::span<const CaseReport> reports) {
  std::vector<CheckSummary> out;
  for (const auto& cr : reports) {
    const auto& r = cr.report;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const CheckSummary& s) { return s.check == r.check; });
    if (it == out.end()) {
      out.push_back(CheckSummary{r.check, 0, 0, 0.0, "", r.informational});
      it = out.end() - 1;
    }
    ++it->n_cases;
    if (!r.holds && !r.informational) ++it->violations;
    const double ratio = r.ratio();
    if (it->worst_case.empty() || ratio > it->worst_ratio) {
      it->worst_ratio = ratio;
      it->worst_case = cr.case_id;
    }
  }
  return out;
}

}  // namespace bmo::analysis

#include "bmo/analysis/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "bmo/analysis/bounds.hpp"
#include "bmo/error.hpp"
#include "bmo/filtration/stopping.hpp"
#include "bmo/numeric.hpp"

namespace bmo::analysis {

using filtration::GridMatrix;
using filtration::NodeId;

namespace {

constexpr double kMax = std::numeric_limits<double>::max();

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string node_name(const FiniteFilteredSpace& space, NodeId n) {
  return "node " + std::to_string(n) + " (level " + std::to_string(space.level_of(n)) + ")";
}

void require_level(const FiniteFilteredSpace& space, int level, const char* what) {
  if (level < 0 || level > space.depth())
    throw ValidationError(std::string(what) + " = " + std::to_string(level) +
                          " is outside [0, " + std::to_string(space.depth()) + "]");
}

void require_nondecreasing(const FiniteFilteredSpace& space, const AdaptedProcess& a) {
  for (NodeId n = 1; n < space.node_count(); ++n)
    if (a[n] < a[space.parent(n)])
      throw ValidationError("process must be nondecreasing; it decreases into " +
                            node_name(space, n));
}

// Values along every root-to-leaf path, leaf-major.
class Paths {
 public:
  Paths(const FiniteFilteredSpace& space, const AdaptedProcess& v)
      : tau_(space.depth()), leaves_(space.level_size(tau_)), data_(leaves_ * (tau_ + 1)) {
    const NodeId first = space.level_begin(tau_);
    for (std::size_t i = 0; i < leaves_; ++i) {
      NodeId n = first + i;
      for (int k = tau_; k >= 0; --k) {
        data_[i * (tau_ + 1) + k] = v[n];
        n = space.parent(n);
      }
    }
  }
  double at(std::size_t leaf, int k) const { return data_[leaf * (tau_ + 1) + k]; }
  /// max_{lo<=k<=hi} |V_k - c| along the path.
  double sup_dev(std::size_t leaf, int lo, int hi, double c) const {
    double m = 0.0;
    for (int k = lo; k <= hi; ++k) m = std::max(m, std::fabs(at(leaf, k) - c));
    return m;
  }

 private:
  int tau_;
  std::size_t leaves_;
  std::vector<double> data_;
};

struct LeafRange {
  std::size_t begin;
  std::size_t end;
};

LeafRange leaf_range(const FiniteFilteredSpace& space, NodeId node) {
  const int level = space.level_of(node);
  std::size_t width = 1;
  for (int k = level; k < space.depth(); ++k) width *= static_cast<std::size_t>(space.branching());
  const std::size_t pos = node - space.level_begin(level);
  return {pos * width, (pos + 1) * width};
}

// E[f(leaf) | node].
template <class F>
double cond_mean(const FiniteFilteredSpace& space, NodeId node, F&& f) {
  const LeafRange r = leaf_range(space, node);
  const NodeId first = space.level_begin(space.depth());
  std::vector<double> terms(r.end - r.begin);
  const double mass = space.prob(node);
  for (std::size_t i = r.begin; i < r.end; ++i)
    terms[i - r.begin] = space.prob(first + i) / mass * f(i);
  return pairwise_sum(terms);
}

// log E[exp(g(leaf)) | node], computed in log space.
template <class G>
double log_cond_mean_exp(const FiniteFilteredSpace& space, NodeId node, G&& g) {
  const LeafRange r = leaf_range(space, node);
  const NodeId first = space.level_begin(space.depth());
  std::vector<double> terms(r.end - r.begin);
  const double log_mass = std::log(space.prob(node));
  for (std::size_t i = r.begin; i < r.end; ++i)
    terms[i - r.begin] = std::log(space.prob(first + i)) - log_mass + g(i);
  return log_sum_exp(terms);
}

double factorial_power(double c, int p, bool& saturated) {
  saturated = false;
  if (c == 0.0) return 0.0;
  double f = 1.0;
  for (int k = 2; k <= p; ++k) f *= k;
  const double v = f * std::pow(c, p);
  if (std::isfinite(v)) return v;
  saturated = true;
  return kMax;
}

CheckReport make_equality_report(std::string check, double a, double b, std::string witness) {
  CheckReport r;
  r.check = std::move(check);
  r.lhs = std::fabs(a - b);
  r.rhs = 0.0;
  r.tolerance = check_tolerance(std::max(std::fabs(a), std::fabs(b)));
  r.holds = r.lhs <= r.tolerance;
  r.witness = std::move(witness);
  return r;
}

std::string window(int s, int t) {
  return "[" + std::to_string(s) + ", " + std::to_string(t) + "]";
}

}  // namespace

double CheckReport::ratio() const noexcept {
  const double denom = rhs + tolerance;
  if (denom > 0.0) return lhs / denom;
  return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

double check_tolerance(double rhs) noexcept { return std::fabs(rhs) * 1e-9 + 1e-12; }

CheckReport make_report(std::string check, double lhs, double rhs, std::string witness) {
  CheckReport r;
  r.check = std::move(check);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = check_tolerance(rhs);
  r.holds = lhs <= rhs + r.tolerance;
  r.witness = std::move(witness);
  return r;
}

CheckReport make_log_report(std::string check, double log_lhs, double log_rhs,
                            std::string witness) {
  const double log_max = std::log(kMax);
  const bool sat_l = log_lhs >= log_max;
  const bool sat_r = log_rhs >= log_max;
  CheckReport r = make_report(std::move(check), sat_l ? kMax : std::exp(log_lhs),
                              sat_r ? kMax : std::exp(log_rhs), std::move(witness));
  if (sat_l || sat_r) {
    r.saturated = true;
    r.holds = log_lhs <= log_rhs + 1e-9;
  }
  return r;
}

void WorstCase::offer(CheckReport r) {
  if (!any_) {
    worst_ = std::move(r);
    any_ = true;
    return;
  }
  if (r.holds != worst_.holds) {
    if (!r.holds) worst_ = std::move(r);
    return;
  }
  if (r.ratio() > worst_.ratio()) worst_ = std::move(r);
}

CheckReport WorstCase::result() const {
  if (any_) return worst_;
  return make_report(check_, 0.0, 0.0, "no candidates");
}

CheckReport jn_moment_check(const FiniteFilteredSpace& space, const AdaptedProcess& v, int r,
                            int p, const RhoOptions& options) {
  require_level(space, r, "r");
  if (p < 1) throw ValidationError("jn_moment_check: p must be a positive integer");
  const int tau = space.depth();
  const Paths paths(space, v);
  const double rho = filtration::rho_exact(space, v, r, tau, options);
  const Bound bound = jn_moment_bound(rho, p);

  double lhs = 0.0;
  NodeId arg = space.level_begin(r);
  for (NodeId a = space.level_begin(r); a < space.level_end(r); ++a) {
    const double e = cond_mean(space, a, [&](std::size_t leaf) {
      return std::pow(paths.sup_dev(leaf, r, tau, paths.at(leaf, r)), p);
    });
    if (e > lhs) {
      lhs = e;
      arg = a;
    }
  }
  CheckReport rep = make_report("jn_moment", lhs, bound.value,
                                node_name(space, arg) + ", p=" + std::to_string(p) +
                                    ", rho=" + num(rho));
  rep.saturated = bound.saturated;
  return rep;
}

CheckReport khasminskii_check(const FiniteFilteredSpace& space, const AdaptedProcess& a, int r,
                              double lambda, std::span<const int> partition, std::uint64_t cap) {
  require_level(space, r, "r");
  require_nondecreasing(space, a);
  if (!(lambda > 0.0)) throw ValidationError("khasminskii_check: lambda must be positive");
  const int tau = space.depth();
  if (partition.size() < 2 || partition.front() != 0 || partition.back() != tau)
    throw ValidationError("partition must run from 0 to the depth");
  for (std::size_t k = 1; k < partition.size(); ++k)
    if (partition[k] <= partition[k - 1])
      throw ValidationError("partition points must be strictly increasing");

  std::vector<double> rhos;
  std::string cells;
  const RhoOptions open{false, cap};
  for (std::size_t k = 1; k < partition.size(); ++k) {
    if (partition[k] <= r) continue;
    const int lo = std::max(partition[k - 1], r);
    rhos.push_back(filtration::rho_exact(space, a, lo, partition[k], open));
    cells += window(lo, partition[k]);
  }
  const double product = khasminskii_product(lambda, rhos);

  const Paths paths(space, a);
  double log_lhs = -std::numeric_limits<double>::infinity();
  NodeId arg = space.level_begin(r);
  for (NodeId n = space.level_begin(r); n < space.level_end(r); ++n) {
    const double e = log_cond_mean_exp(space, n, [&](std::size_t leaf) {
      return lambda * (paths.at(leaf, tau) - paths.at(leaf, r));
    });
    if (e > log_lhs) {
      log_lhs = e;
      arg = n;
    }
  }
  return make_log_report("khasminskii", log_lhs, std::log(product),
                         node_name(space, arg) + ", cells " + (cells.empty() ? "none" : cells));
}

MaximalReports maximal_check(const FiniteFilteredSpace& space, const AdaptedProcess& v, int s,
                             int t, const RhoOptions& options) {
  require_level(space, s, "s");
  require_level(space, t, "t");
  if (s > t) throw ValidationError("maximal_check: s must not exceed t");
  const AdaptedProcess star = filtration::maximal_process(space, v);
  const double rho_v = filtration::rho_exact(space, v, s, t, options);
  const double rho_star = filtration::rho_exact(space, star, s, t, options);

  MaximalReports out;
  out.star = make_report("maximal_11rho", rho_star, 11.0 * rho_v,
                         "window " + window(s, t) + ", rho(V)=" + num(rho_v));

  const Paths paths(space, v);
  double lhs = 0.0;
  std::string witness = "window " + window(s, t);
  for (NodeId a = space.level_begin(s); a < space.level_end(s); ++a) {
    std::vector<double> centres{v[a]};
    if (options.include_left_jump) centres.push_back(v.left_limit(space, a));
    for (double c : centres) {
      const double e =
          cond_mean(space, a, [&](std::size_t leaf) { return paths.sup_dev(leaf, s, t, c); });
      if (e > lhs) {
        lhs = e;
        witness = node_name(space, a) + ", window " + window(s, t) + ", centre " + num(c);
      }
    }
  }
  out.four_rho = make_report("maximal_4rho", lhs, 4.0 * rho_v, witness);
  return out;
}

CheckReport garsia_check(const FiniteFilteredSpace& space, const AdaptedProcess& x,
                         std::span<const double> u, std::span<const double> y, int s,
                         double alpha, double beta, std::uint64_t cap) {
  require_level(space, s, "s");
  const int tau = space.depth();
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw ValidationError("garsia_check: alpha and beta must be positive");
  if (u.size() != space.level_size(tau))
    throw ValidationError("garsia_check: U needs one value per leaf");
  if (y.size() != space.level_size(s))
    throw ValidationError("garsia_check: Y needs one value per level-s atom");
  for (double v : u)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ValidationError("garsia_check: U must be finite and non-negative");

  for (NodeId a = space.level_begin(s); a < space.level_end(s); ++a) {
    const double ya = y[a - space.level_begin(s)];
    if (std::fabs(x[a] - ya) >= alpha && std::fabs(x.left_limit(space, a) - ya) > alpha)
      throw HypothesisError("Y inadmissible at " + node_name(space, a) + ": |X_s - Y| = " +
                            num(std::fabs(x[a] - ya)) + " >= alpha but |X_{s-} - Y| = " +
                            num(std::fabs(x.left_limit(space, a) - ya)) + " > alpha = " +
                            num(alpha));
  }

  // Domination hypothesis: on each stop atom a of S, sup_T E_a|X_T - X_{S-}|
  // must not exceed E_a U. S at grid level j has X_{S-} = X_{j-1}; S strictly
  // inside (j, j+1) has X_{S-} = X_j.
  for (int j = s; j <= tau; ++j) {
    for (NodeId a = space.level_begin(j); a < space.level_end(j); ++a) {
      const double eu = cond_mean(space, a, [&](std::size_t leaf) { return u[leaf]; });
      std::vector<std::pair<double, const char*>> centres{{x.left_limit(space, a), "grid"}};
      if (j < tau) centres.emplace_back(x[a], "interior");
      const auto cuts = filtration::enumerate_cuts(space, a, tau, cap);
      for (const auto& [c, kind] : centres) {
        double best = 0.0;
        std::size_t best_cut = 0;
        for (std::size_t k = 0; k < cuts.size(); ++k) {
          double e = 0.0;
          for (NodeId n : cuts[k]) e += space.prob(n) / space.prob(a) * std::fabs(x[n] - c);
          if (e > best) {
            best = e;
            best_cut = k;
          }
        }
        if (best > eu + check_tolerance(eu)) {
          std::string cut;
          for (NodeId n : cuts[best_cut]) cut += (cut.empty() ? "" : ",") + std::to_string(n);
          throw HypothesisError("domination hypothesis fails: S stops at " + node_name(space, a) +
                                " (" + kind + "), T stops on {" + cut +
                                "}: E_S|X_T - X_{S-}| = " + num(best) + " > E_S U = " + num(eu));
        }
      }
    }
  }

  const Paths paths(space, x);
  WorstCase worst("garsia");
  for (NodeId a = space.level_begin(s); a < space.level_end(s); ++a) {
    const double ya = y[a - space.level_begin(s)];
    const double lhs = beta * cond_mean(space, a, [&](std::size_t leaf) {
      return paths.sup_dev(leaf, s, tau, ya) >= alpha + beta ? 1.0 : 0.0;
    });
    const double rhs = cond_mean(space, a, [&](std::size_t leaf) {
      return paths.sup_dev(leaf, s, tau, ya) >= alpha ? u[leaf] : 0.0;
    });
    worst.offer(lhs, rhs,
                node_name(space, a) + ", alpha=" + num(alpha) + ", beta=" + num(beta));
  }
  return worst.result();
}

bool garsia_y_admissible(const FiniteFilteredSpace& space, const AdaptedProcess& x,
                         std::span<const double> y, int s, double alpha) {
  require_level(space, s, "s");
  if (y.size() != space.level_size(s))
    throw ValidationError("garsia_y_admissible: Y needs one value per level-s atom");
  for (NodeId a = space.level_begin(s); a < space.level_end(s); ++a) {
    const double ya = y[a - space.level_begin(s)];
    if (std::fabs(x[a] - ya) >= alpha && std::fabs(x.left_limit(space, a) - ya) > alpha)
      return false;
  }
  return true;
}

namespace {

// E_a A_tau - A_{a-} for every node a, in node order.
std::vector<double> energy_excess(const FiniteFilteredSpace& space, const AdaptedProcess& a) {
  const int tau = space.depth();
  const auto leaf = a.level_values(space, tau);
  std::vector<double> out(space.node_count());
  for (int j = 0; j <= tau; ++j) {
    const auto ce = space.cond_expectation(leaf, j);
    for (std::size_t i = 0; i < ce.size(); ++i) {
      const NodeId n = space.level_begin(j) + i;
      out[n] = ce[i] - a.left_limit(space, n);
    }
  }
  return out;
}

}  // namespace

double energy_constant(const FiniteFilteredSpace& space, const AdaptedProcess& a) {
  require_nondecreasing(space, a);
  const auto ex = energy_excess(space, a);
  return std::max(0.0, *std::max_element(ex.begin(), ex.end()));
}

CheckReport energy_check(const FiniteFilteredSpace& space, const AdaptedProcess& a, int s,
                         double c, int p) {
  require_level(space, s, "s");
  require_nondecreasing(space, a);
  if (!(c >= 0.0)) throw ValidationError("energy_check: c must be non-negative");
  if (p < 1) throw ValidationError("energy_check: p must be a positive integer");
  const auto ex = energy_excess(space, a);
  for (NodeId n = 0; n < ex.size(); ++n)
    if (ex[n] > c + check_tolerance(c))
      throw HypothesisError("energy hypothesis fails: S = " + std::to_string(space.level_of(n)) +
                            " on " + node_name(space, n) + " gives E_S(A_tau - A_{S-}) = " +
                            num(ex[n]) + " > c = " + num(c));

  const int tau = space.depth();
  const Paths paths(space, a);
  double lhs = 0.0;
  NodeId arg = space.level_begin(s);
  for (NodeId n = space.level_begin(s); n < space.level_end(s); ++n) {
    const double e = cond_mean(space, n, [&](std::size_t leaf) {
      return std::pow(paths.at(leaf, tau) - paths.at(leaf, s), p);
    });
    if (e > lhs) {
      lhs = e;
      arg = n;
    }
  }
  bool saturated = false;
  const double rhs = factorial_power(c, p, saturated);
  CheckReport rep =
      make_report("energy", lhs, rhs, node_name(space, arg) + ", p=" + std::to_string(p));
  rep.saturated = saturated;
  return rep;
}

CheckReport exp_vmoa_check(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                           double lambda, double p, const RhoOptions& options) {
  if (!(lambda > 0.0)) throw ValidationError("exp_vmoa_check: lambda must be positive");
  if (!(p >= 1.0)) throw ValidationError("exp_vmoa_check: p must be >= 1");
  const int tau = space.depth();
  const auto data = filtration::oscillation_data(space, v, options);
  const double w = pvar_control(data.rho, p).w(0, static_cast<std::size_t>(tau));
  const double log_rhs = log_exp_vmoa_bound(lambda, p, w);

  const Paths paths(space, v);
  double log_lhs = -std::numeric_limits<double>::infinity();
  NodeId arg = 0;
  for (int r = 0; r <= tau; ++r) {
    for (NodeId n = space.level_begin(r); n < space.level_end(r); ++n) {
      const double e = log_cond_mean_exp(space, n, [&](std::size_t leaf) {
        return lambda * paths.sup_dev(leaf, r, tau, paths.at(leaf, r));
      });
      if (e > log_lhs) {
        log_lhs = e;
        arg = n;
      }
    }
  }
  return make_log_report("exp_vmoa", log_lhs, log_rhs,
                         node_name(space, arg) + ", lambda=" + num(lambda) + ", p=" + num(p) +
                             ", w=" + num(w));
}

CheckReport v1_check(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                     const RhoOptions& options) {
  const int tau = space.depth();
  const auto data = filtration::oscillation_data(space, v, options);
  const auto control = pvar_control(data.rho, 1.0);
  const Paths paths(space, v);
  const std::size_t leaves = space.level_size(tau);
  WorstCase worst("v1");
  for (int s = 0; s <= tau; ++s) {
    for (int t = s; t <= tau; ++t) {
      double lhs = 0.0;
      std::size_t arg = 0;
      for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
        const double d = std::fabs(paths.at(leaf, t) - paths.at(leaf, s));
        if (d > lhs) {
          lhs = d;
          arg = leaf;
        }
      }
      worst.offer(lhs, 22.0 * control.w(s, t),
                  "window " + window(s, t) + ", leaf " + std::to_string(arg));
    }
  }
  return worst.result();
}

CheckReport vmo_moment_check(const FiniteFilteredSpace& space, const AdaptedProcess& v, int s,
                             int t, double m, double p, double C_p, const RhoOptions& options) {
  require_level(space, s, "s");
  require_level(space, t, "t");
  if (s > t) throw ValidationError("vmo_moment_check: s must not exceed t");
  const auto data = filtration::oscillation_data(space, v, options);
  const double w = pvar_control(data.rho, p).w(s, t);
  const double rhs = vmo_moment_bound(m, p, w, C_p);
  const Paths paths(space, v);
  double lhs = 0.0;
  NodeId arg = space.level_begin(s);
  for (NodeId a = space.level_begin(s); a < space.level_end(s); ++a) {
    const double e = cond_mean(space, a, [&](std::size_t leaf) {
      return std::pow(paths.sup_dev(leaf, s, t, paths.at(leaf, s)), m);
    });
    if (e > lhs) {
      lhs = e;
      arg = a;
    }
  }
  CheckReport rep = make_report("vmo_moment", lhs, rhs,
                                node_name(space, arg) + ", window " + window(s, t) +
                                    ", m=" + num(m) + ", p=" + num(p));
  rep.informational = true;
  return rep;
}

CheckReport jump_kappa_check(const FiniteFilteredSpace& space, const AdaptedProcess& v) {
  const double jump = filtration::max_pathwise_jump(space, v);
  const double kappa = filtration::kappa_exact(space, v);
  return make_equality_report("jump_equals_kappa", jump, kappa,
                              "max jump " + num(jump) + ", kappa " + num(kappa));
}

CheckReport kappa_rho_check(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                            const RhoOptions& options) {
  const double kappa = filtration::kappa_exact(space, v);
  const double rho = filtration::rho_exact(space, v, 0, space.depth(), options);
  return make_report("kappa_le_rho", kappa, rho, "window " + window(0, space.depth()));
}

CheckReport stopping_pair_check(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                                const RhoOptions& options) {
  // Each window [s, t] is treated as the process restarted at s, so
  // V_{s-} = V_s there and the pair supremum is the left-open modulus.
  const int tau = space.depth();
  const std::size_t n = static_cast<std::size_t>(tau) + 1;
  const Paths paths(space, v);

  // det_open(u, w): ess-sup E_u|V_w - V_u|; det_grid(u, w): with V_{u-}.
  GridMatrix det_open(n), det_grid(n);
  for (int u = 0; u <= tau; ++u) {
    for (int w = u; w <= tau; ++w) {
      for (NodeId a = space.level_begin(u); a < space.level_end(u); ++a) {
        const double c_open = v[a];
        const double c_grid = v.left_limit(space, a);
        det_open(u, w) = std::max(det_open(u, w), cond_mean(space, a, [&](std::size_t leaf) {
                                    return std::fabs(paths.at(leaf, w) - c_open);
                                  }));
        det_grid(u, w) = std::max(det_grid(u, w), cond_mean(space, a, [&](std::size_t leaf) {
                                    return std::fabs(paths.at(leaf, w) - c_grid);
                                  }));
      }
    }
  }
  std::vector<double> jump(n, 0.0);
  for (int j = 1; j <= tau; ++j)
    for (NodeId a = space.level_begin(j); a < space.level_end(j); ++a)
      jump[j] = std::max(jump[j], std::fabs(v[a] - v[space.parent(a)]));

  const RhoOptions open{false, options.cap};
  WorstCase worst("stopping_pairs_2b3c");
  for (int s = 0; s <= tau; ++s) {
    for (int t = s; t <= tau; ++t) {
      double b = 0.0, c = 0.0;
      for (int w = s; w <= t; ++w) b = std::max(b, det_open(s, w));
      for (int u = s + 1; u <= t; ++u) {
        c = std::max(c, jump[u]);
        for (int w = u; w <= t; ++w) b = std::max(b, std::max(det_open(u, w), det_grid(u, w)));
      }
      const double sup = filtration::rho_exact(space, v, s, t, open);
      worst.offer(sup, 2.0 * b + 3.0 * c,
                  "window " + window(s, t) + ", B=" + num(b) + ", C=" + num(c));
    }
  }
  return worst.result();
}

CheckReport rho_monotone_check(const GridMatrix& rho) {
  WorstCase worst("rho_monotone");
  const std::size_t n = rho.size();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s; t < n; ++t)
      for (std::size_t a = s; a <= t; ++a)
        for (std::size_t b = a; b <= t; ++b)
          if (rho(a, b) > rho(s, t) + check_tolerance(rho(s, t)) || (a == s && b == t))
            worst.offer(rho(a, b), rho(s, t),
                        "inner " + window(int(a), int(b)) + " of " + window(int(s), int(t)));
  return worst.result();
}

CheckReport rho_triangle_check(const GridMatrix& rho) {
  WorstCase worst("rho_triangle");
  const std::size_t n = rho.size();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t u = s; u < n; ++u)
      for (std::size_t t = u; t < n; ++t)
        worst.offer(rho(s, t), rho(s, u) + rho(u, t),
                    window(int(s), int(t)) + " split at " + std::to_string(u));
  return worst.result();
}

CheckReport w_superadditive_check(const OscillationControl& control) {
  WorstCase worst("w_superadditive");
  const std::size_t n = control.w.size();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t u = s; u < n; ++u)
      for (std::size_t t = u; t < n; ++t)
        worst.offer(control.w(s, u) + control.w(u, t), control.w(s, t),
                    window(int(s), int(t)) + " split at " + std::to_string(u));
  return worst.result();
}

CheckReport w_dominates_check(const GridMatrix& rho, const OscillationControl& control) {
  WorstCase worst("w_dominates_rho");
  for (std::size_t s = 0; s < rho.size(); ++s)
    for (std::size_t t = s + 1; t < rho.size(); ++t)
      worst.offer(std::pow(rho(s, t), control.p), control.w(s, t), window(int(s), int(t)));
  return worst.result();
}

CheckReport vcontrol_check(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                           const OscillationControl& control) {
  const int tau = space.depth();
  const Paths paths(space, v);
  WorstCase worst("vcontrol");
  for (int s = 0; s <= tau; ++s) {
    for (int t = s; t <= tau; ++t) {
      double lhs = 0.0;
      NodeId arg = space.level_begin(s);
      for (NodeId a = space.level_begin(s); a < space.level_end(s); ++a) {
        const double e = cond_mean(space, a, [&](std::size_t leaf) {
          return std::fabs(paths.at(leaf, t) - paths.at(leaf, s));
        });
        if (e > lhs) {
          lhs = e;
          arg = a;
        }
      }
      worst.offer(lhs, std::pow(control.w(s, t), 1.0 / control.p),
                  node_name(space, arg) + ", window " + window(s, t));
    }
  }
  return worst.result();
}

CheckReport rho_routes_check(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                             std::uint64_t cap) {
  const int tau = space.depth();
  WorstCase worst("rho_routes_agree");
  for (bool left : {true, false}) {
    const auto data = filtration::oscillation_data(space, v, RhoOptions{left, cap});
    for (int s = 0; s <= tau; ++s) {
      for (int t = s; t <= tau; ++t) {
        const double exact = data.rho(s, t);
        const double snell = filtration::rho_snell(space, v, s, t, left);
        worst.offer(make_equality_report(
            "rho_routes_agree", exact, snell,
            "window " + window(s, t) + (left ? " with" : " without") + " left jump"));
      }
    }
  }
  return worst.result();
}

CheckReport tower_check(const FiniteFilteredSpace& space, std::span<const double> leaf_values) {
  const int tau = space.depth();
  if (leaf_values.size() != space.level_size(tau))
    throw ValidationError("tower_check: one value per leaf required");
  WorstCase worst("tower_property");
  for (int s = 0; s <= tau; ++s) {
    const auto at_s = space.cond_expectation(leaf_values, s);
    for (int r = 0; r <= s; ++r) {
      const auto direct = space.cond_expectation(leaf_values, r);
      const auto nested = space.cond_expectation(at_s, s, r);
      for (std::size_t i = 0; i < direct.size(); ++i)
        worst.offer(make_equality_report("tower_property", nested[i], direct[i],
                                         "levels " + std::to_string(r) + " <= " +
                                             std::to_string(s) + ", atom " + std::to_string(i)));
    }
  }
  return worst.result();
}

}  // namespace bmo::analysis

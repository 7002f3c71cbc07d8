#pragma once
// Exact inequality checks on finite filtered spaces: every left-hand side is a
// finite sum over the leaves of the tree, every right-hand side comes from the
// bound calculators fed with exact moduli.

#include <cstdint>
#include <span>
#include <string>

#include "bmo/analysis/control.hpp"
#include "bmo/filtration/oscillation.hpp"
#include "bmo/filtration/process.hpp"
#include "bmo/filtration/space.hpp"

namespace bmo::analysis {

using filtration::AdaptedProcess;
using filtration::FiniteFilteredSpace;
using filtration::RhoOptions;

struct CheckReport {
  std::string check;
  bool holds = true;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  /// Atom, grid pair or partition attaining the worst ratio.
  std::string witness;
  /// A side overflowed and was clamped to DBL_MAX.
  bool saturated = false;
  /// Ratio-only check: the constant on the right is caller-supplied.
  bool informational = false;

  /// lhs / (rhs + tolerance); 0 when lhs vanishes too.
  double ratio() const noexcept;
};

/// rhs * 1e-9 + 1e-12.
double check_tolerance(double rhs) noexcept;

/// Report for lhs <= rhs with the default tolerance.
CheckReport make_report(std::string check, double lhs, double rhs, std::string witness = {});

/// Report comparing exp(log_lhs) <= exp(log_rhs); falls back to the log domain
/// when a side overflows.
CheckReport make_log_report(std::string check, double log_lhs, double log_rhs,
                            std::string witness = {});

/// Keeps the worst of a family of candidate comparisons: a violating
/// candidate beats any passing one, then the larger ratio wins.
class WorstCase {
 public:
  explicit WorstCase(std::string check) : check_(std::move(check)) {}
  void offer(CheckReport r);
  void offer(double lhs, double rhs, const std::string& witness) {
    offer(make_report(check_, lhs, rhs, witness));
  }
  /// The retained report; a passing 0 <= 0 report when nothing was offered.
  CheckReport result() const;

 private:
  std::string check_;
  bool any_ = false;
  CheckReport worst_;
};

/// ess-sup E_r max_{r<=k<=tau} |V_k - V_r|^p against p! (11 rho_{r,tau})^p.
CheckReport jn_moment_check(const FiniteFilteredSpace& space, const AdaptedProcess& v, int r,
                            int p, const RhoOptions& options = {});

/// ess-sup E_r exp(lambda (A_tau - A_r)) against prod_k (1 - lambda rho_k)^{-1}
/// over the cells of `partition` right of r, each clipped to
/// [max(t_{k-1}, r), t_k]. A cell's modulus excludes the jump at its left end:
/// the estimate on a cell comes from the energy inequality for the process
/// restarted there. `partition` lists grid points 0 = t_0 < ... < t_K = depth.
/// Throws ValidationError when A decreases somewhere, when the partition is
/// malformed, or when some lambda rho_k >= 1.
CheckReport khasminskii_check(const FiniteFilteredSpace& space, const AdaptedProcess& a, int r,
                              double lambda, std::span<const int> partition,
                              std::uint64_t cap = filtration::kDefaultEnumerationCap);

/// On every level-s atom where |X_s - Y| >= alpha (the first exit happens at
/// s), |X_{s-} - Y| <= alpha. Always true for Y = X_s and Y = X_{s-}. Without
/// it the upcrossing bound fails: X = 1 constant, Y = 0, U = 0.
bool garsia_y_admissible(const FiniteFilteredSpace& space, const AdaptedProcess& x,
                         std::span<const double> y, int s, double alpha);

struct MaximalReports {
  /// rho_{s,t}(V*) <= 11 rho_{s,t}(V).
  CheckReport star;
  /// ess-sup E_s max_{s<=k<=t} |V_k - V_{s-}| <= 4 rho_{s,t}(V).
  CheckReport four_rho;
};
MaximalReports maximal_check(const FiniteFilteredSpace& space, const AdaptedProcess& v, int s,
                             int t, const RhoOptions& options = {});

/// beta P_s(X* >= alpha + beta) <= E_s(U 1{X* >= alpha}) on every level-s atom,
/// with X* = max_{s<=k<=tau} |X_k - Y|. `u` holds one non-negative value per
/// leaf and `y` one value per level-s atom. The domination hypothesis
/// E_S|X_T - X_{S-}| <= E_S U is verified first by enumerating every pair
/// s <= S <= T <= tau; a failure throws HypothesisError naming S and T.
/// Y must also be admissible (garsia_y_admissible), else HypothesisError.
CheckReport garsia_check(const FiniteFilteredSpace& space, const AdaptedProcess& x,
                         std::span<const double> u, std::span<const double> y, int s,
                         double alpha, double beta,
                         std::uint64_t cap = filtration::kDefaultEnumerationCap);

/// Smallest c with ess-sup E_S(A_tau - A_{S-}) <= c for all stopping times S.
double energy_constant(const FiniteFilteredSpace& space, const AdaptedProcess& a);

/// ess-sup E_s (A_tau - A_s)^p <= p! c^p. Throws HypothesisError naming the
/// offending stop atom when c is below energy_constant, ValidationError when A
/// decreases somewhere.
CheckReport energy_check(const FiniteFilteredSpace& space, const AdaptedProcess& a, int s,
                         double c, int p);

/// max_r ess-sup E_r exp(lambda max_{k>=r} |V_k - V_r|) against
/// 2^{1 + (22 lambda)^p w_{0,tau}}, w from pvar_control of the exact rho grid.
CheckReport exp_vmoa_check(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                           double lambda, double p, const RhoOptions& options = {});

/// |V_t - V_s| <= 22 w_{s,t} (p = 1) for all grid pairs and all paths.
CheckReport v1_check(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                     const RhoOptions& options = {});

/// ess-sup E_s max_{s<=r<=t} |V_r - V_s|^m against
/// C_p Gamma(m (1 - 1/p) + 1) w_{s,t}^{m/p}. Informational.
CheckReport vmo_moment_check(const FiniteFilteredSpace& space, const AdaptedProcess& v, int s,
                             int t, double m, double p, double C_p,
                             const RhoOptions& options = {});

// Structural properties of the moduli.

/// Pathwise maximal jump equals kappa (two-sided within tolerance).
CheckReport jump_kappa_check(const FiniteFilteredSpace& space, const AdaptedProcess& v);
/// kappa <= rho_{0,tau}.
CheckReport kappa_rho_check(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                            const RhoOptions& options = {});
/// sup over stopping pairs in [s, t] <= 2B + 3C, with B the largest
/// deterministic-pair modulus in the window and C the largest jump, on every
/// window.
CheckReport stopping_pair_check(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                                const RhoOptions& options = {});
/// rho_{u,v} <= rho_{s,t} whenever [u, v] is inside [s, t].
CheckReport rho_monotone_check(const filtration::GridMatrix& rho);
/// rho_{s,t} <= rho_{s,u} + rho_{u,t}.
CheckReport rho_triangle_check(const filtration::GridMatrix& rho);
/// w_{s,u} + w_{u,t} <= w_{s,t}.
CheckReport w_superadditive_check(const OscillationControl& control);
/// rho_{s,t}^p <= w_{s,t} for s < t. A control vanishes on the diagonal, where
/// rho_{s,s} is the jump at s.
CheckReport w_dominates_check(const filtration::GridMatrix& rho, const OscillationControl& control);
/// ess-sup E_s |V_t - V_s| <= w_{s,t}^{1/p}.
CheckReport vcontrol_check(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                           const OscillationControl& control);
/// rho_exact and rho_snell agree on every window under both conventions.
CheckReport rho_routes_check(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                             std::uint64_t cap = filtration::kDefaultEnumerationCap);
/// E[E[X | F_s] | F_r] = E[X | F_r] for all r <= s, X given per leaf.
CheckReport tower_check(const FiniteFilteredSpace& space, std::span<const double> leaf_values);

}  // namespace bmo::analysis

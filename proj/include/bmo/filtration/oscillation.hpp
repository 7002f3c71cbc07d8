#pragma once
// Exact moduli of mean oscillation for step processes on a tree.
//
// rho_{s,t}(V) = sup over stopping times s <= S <= T <= t of
// ess-sup E_S |V_T - V_{S-}|. In the step embedding a continuous-time S lands
// either on a grid time j (F_S = F_j, V_{S-} = V_{j-1}) or strictly inside
// (j, j+1) (F_S = F_j, V_{S-} = V_j); both are taken into account. The
// essential supremum over F_S decomposes over the stop atoms of S, so the sup
// over pairs is the max over nodes a in the window of the sup over stopping
// times T of the subtree below a.

#include <cstdint>
#include <vector>

#include "bmo/filtration/process.hpp"
#include "bmo/filtration/space.hpp"
#include "bmo/filtration/stopping.hpp"

namespace bmo::filtration {

/// Square matrix over grid times 0..n-1; only s <= t entries are meaningful.
class GridMatrix {
 public:
  GridMatrix() = default;
  explicit GridMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t s, std::size_t t) noexcept { return data_[s * n_ + t]; }
  double operator()(std::size_t s, std::size_t t) const noexcept { return data_[s * n_ + t]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct RhoOptions {
  /// Count the jump at the window's left end (S = s with V_{s-} = V_{s-1}).
  /// Off gives rho_{s+,t}, the modulus seen by the process restarted at s.
  bool include_left_jump = true;
  std::uint64_t cap = kDefaultEnumerationCap;
};

/// sup over stopping times T of the subtree below `node` with values up to
/// level t of E[|V_T - center| | node], by enumeration.
double sup_expected_deviation(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                              NodeId node, double center, int t,
                              std::uint64_t cap = kDefaultEnumerationCap);

/// Same quantity by backward induction on the Snell envelope.
double sup_expected_deviation_snell(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                                    NodeId node, double center, int t);

/// Exact rho_{s,t}(V) by stopping-time enumeration.
double rho_exact(const FiniteFilteredSpace& space, const AdaptedProcess& v, int s, int t,
                 const RhoOptions& options = {});

/// rho_{s,t}(V) by optimal stopping; independent route used to cross-check
/// rho_exact.
double rho_snell(const FiniteFilteredSpace& space, const AdaptedProcess& v, int s, int t,
                 bool include_left_jump = true);

/// kappa(V) for the step embedding: max over grid jumps of ess-sup |V_j - V_{j-1}|.
double kappa_exact(const FiniteFilteredSpace& space, const AdaptedProcess& v);

struct OscillationData {
  GridMatrix rho;  // rho(s, t) for 0 <= s <= t <= depth
  double kappa = 0.0;
  double max_jump = 0.0;
};

/// The full grid of rho_exact values, kappa and the pathwise maximal jump.
OscillationData oscillation_data(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                                 const RhoOptions& options = {});

}  // namespace bmo::filtration

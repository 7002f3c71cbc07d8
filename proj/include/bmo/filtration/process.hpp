#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bmo/filtration/space.hpp"

namespace bmo::filtration {

/// A real process adapted to the tree filtration: one value per node, the
/// value at a level-k node being V_k on that atom. In continuous time the
/// process is the right-continuous step function V_t = V_floor(t), so
/// V_{k-} = V_{k-1} and V_{0-} = V_0.
class AdaptedProcess {
 public:
  AdaptedProcess() = default;
  AdaptedProcess(const FiniteFilteredSpace& space, std::vector<double> values);

  static AdaptedProcess constant(const FiniteFilteredSpace& space, double c);
  /// V_k depends on k only.
  static AdaptedProcess deterministic(const FiniteFilteredSpace& space,
                                      std::span<const double> by_level);
  /// V at a node is fn(path), where path lists the child index taken at each
  /// level from the root (its length is the node's level).
  static AdaptedProcess from_path(const FiniteFilteredSpace& space,
                                  const std::function<double(std::span<const int>)>& fn);
  /// Martingale closed by a leaf-valued random variable: V_k = E[X | F_k].
  static AdaptedProcess martingale(const FiniteFilteredSpace& space,
                                   std::span<const double> leaf_values);

  double operator[](NodeId node) const noexcept { return values_[node]; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// V_{k-} at a level-k node: the parent's value, or the node's own value at
  /// the root.
  double left_limit(const FiniteFilteredSpace& space, NodeId node) const noexcept {
    const NodeId p = space.parent(node);
    return p == kNoNode ? values_[node] : values_[p];
  }

  std::vector<double> level_values(const FiniteFilteredSpace& space, int level) const;

 private:
  std::vector<double> values_;
};

/// Child-index path from the root to `node`.
std::vector<int> path_to(const FiniteFilteredSpace& space, NodeId node);

/// V*_k = max_{j <= k} |V_j - V_0| along each path.
AdaptedProcess maximal_process(const FiniteFilteredSpace& space, const AdaptedProcess& v);

/// True when V never decreases from a node to its children.
bool is_nondecreasing(const FiniteFilteredSpace& space, const AdaptedProcess& v);

/// max over paths and 1 <= j <= depth of |V_j - V_{j-1}|, scanned leaf by leaf.
double max_pathwise_jump(const FiniteFilteredSpace& space, const AdaptedProcess& v);

}  // namespace bmo::filtration

#pragma once
// Stopping times on the tree filtration.
//
// A stopping time with window [s, t] is a set of labelled nodes: each path
// stops at its first labelled node of level in [s, t], or at level t when no
// such node exists. The stop decision at a node depends only on that node,
// hence on its atom. The atoms of F_S are the nodes where paths stop; they
// form a cut of the tree between levels s and t.

#include <cstdint>
#include <span>
#include <vector>

#include "bmo/filtration/space.hpp"

namespace bmo::filtration {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

class StoppingTime {
 public:
  /// Builds the stopping time whose stop atoms are `cut`. Throws
  /// ValidationError if `cut` does not hit every path through [s, t] exactly
  /// once.
  static StoppingTime from_cut(const FiniteFilteredSpace& space, int s, int t,
                               std::span<const NodeId> cut);
  /// The constant stopping time equal to `level`.
  static StoppingTime constant(const FiniteFilteredSpace& space, int level);

  int window_start() const noexcept { return s_; }
  int window_end() const noexcept { return t_; }
  bool labelled(NodeId node) const noexcept { return labels_[node] != 0; }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }

  /// Stop atoms in node order.
  std::vector<NodeId> atoms(const FiniteFilteredSpace& space) const;
  /// Node at which the path through `leaf` stops.
  NodeId stop_node(const FiniteFilteredSpace& space, NodeId leaf) const;

 private:
  friend std::vector<StoppingTime> enumerate_stopping_times(const FiniteFilteredSpace&, int, int,
                                                            std::uint64_t);
  static StoppingTime unchecked(const FiniteFilteredSpace& space, int s, int t,
                                std::span<const NodeId> cut);

  int s_ = 0;
  int t_ = 0;
  std::vector<std::uint8_t> labels_;
};

/// Number of stopping times with values in [level(root), t] on the subtree
/// below one node whose remaining window has `width` levels:
/// N(0) = 1, N(d) = 1 + N(d-1)^branching. Saturates at UINT64_MAX.
std::uint64_t subtree_stopping_count(int branching, int width) noexcept;

/// Number of stopping times of the whole space with values in [s, t]:
/// N(t - s) raised to the number of level-s atoms. Saturating.
std::uint64_t stopping_time_count(const FiniteFilteredSpace& space, int s, int t);

/// All stopping times with s <= S <= t. Throws EnumerationInfeasible naming
/// the count when it exceeds `cap`.
std::vector<StoppingTime> enumerate_stopping_times(const FiniteFilteredSpace& space, int s, int t,
                                                   std::uint64_t cap = kDefaultEnumerationCap);

/// All stop-atom cuts of the subtree rooted at `node`, for stopping times with
/// values in [level(node), t]. Same cap semantics.
std::vector<std::vector<NodeId>> enumerate_cuts(const FiniteFilteredSpace& space, NodeId node,
                                                int t,
                                                std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace bmo::filtration

#pragma once
// Finite filtered probability spaces encoded as complete b-ary trees.
//
// Level k of the tree holds the atoms of F_k. Nodes are numbered level by
// level, so the level-k atoms occupy a contiguous index range and the children
// of the i-th node of level k are nodes b*i .. b*i + b - 1 of level k + 1.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace bmo::filtration {

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Edge probabilities: either one distribution reused at every node, or one
/// distribution per internal node (in node order).
struct TransitionSpec {
  std::vector<double> uniform;
  std::vector<std::vector<double>> per_node;

  static TransitionSpec fair(int branching);
  static TransitionSpec same_everywhere(std::vector<double> probs);
  static TransitionSpec explicit_nodes(std::vector<std::vector<double>> probs);
};

class FiniteFilteredSpace {
 public:
  /// Throws ValidationError unless depth >= 0, branching >= 2 and every
  /// distribution is strictly positive and sums to one (tolerance 1e-12).
  static FiniteFilteredSpace build(int depth, int branching, const TransitionSpec& probs);

  int depth() const noexcept { return depth_; }
  int branching() const noexcept { return branching_; }
  std::size_t node_count() const noexcept { return prob_.size(); }

  std::size_t level_size(int level) const;
  NodeId level_begin(int level) const;
  NodeId level_end(int level) const { return level_begin(level) + level_size(level); }
  NodeId root() const noexcept { return 0; }

  int level_of(NodeId node) const noexcept { return level_[node]; }
  NodeId parent(NodeId node) const noexcept { return parent_[node]; }
  NodeId child(NodeId node, int c) const;
  bool is_leaf(NodeId node) const noexcept { return level_[node] == depth_; }
  NodeId ancestor_at(NodeId node, int level) const;
  bool is_descendant(NodeId node, NodeId ancestor) const;

  /// Absolute probability of the atom.
  double prob(NodeId node) const noexcept { return prob_[node]; }
  /// Probability of the edge parent(node) -> node (1 for the root).
  double edge_prob(NodeId node) const noexcept { return edge_[node]; }

  /// Atom-wise conditional expectation. `values` is indexed by the atoms of
  /// `from_level` (position within the level); the result by those of
  /// `to_level` <= `from_level`.
  std::vector<double> cond_expectation(std::span<const double> values, int from_level,
                                       int to_level) const;
  /// E[X | F_level] for a leaf-valued X.
  std::vector<double> cond_expectation(std::span<const double> leaf_values, int level) const {
    return cond_expectation(leaf_values, depth_, level);
  }

  /// Transition distribution at an internal node.
  std::vector<double> transitions(NodeId node) const;

 private:
  int depth_ = 0;
  int branching_ = 2;
  std::vector<NodeId> level_offset_;
  std::vector<int> level_;
  std::vector<NodeId> parent_;
  std::vector<double> edge_;
  std::vector<double> prob_;
};

}  // namespace bmo::filtration

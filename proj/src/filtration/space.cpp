#include "bmo/filtration/space.hpp"

#include <cmath>
#include <string>

#include "bmo/error.hpp"

namespace bmo::filtration {

namespace {

constexpr double kNormTol = 1e-12;
constexpr std::size_t kMaxNodes = std::size_t{1} << 26;

void validate_distribution(const std::vector<double>& p, int branching, const std::string& where) {
  if (static_cast<int>(p.size()) != branching)
    throw ValidationError(where + ": expected " + std::to_string(branching) +
                          " transition probabilities, got " + std::to_string(p.size()));
  double total = 0.0;
  for (double v : p) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError(where + ": transition probabilities must be strictly positive");
    total += v;
  }
  if (std::fabs(total - 1.0) > kNormTol)
    throw ValidationError(where + ": transition probabilities sum to " + std::to_string(total));
}

}  // namespace

TransitionSpec TransitionSpec::fair(int branching) {
  if (branching < 2) throw ValidationError("branching must be at least 2");
  return same_everywhere(std::vector<double>(static_cast<std::size_t>(branching), 1.0 / branching));
}

TransitionSpec TransitionSpec::same_everywhere(std::vector<double> probs) {
  TransitionSpec s;
  s.uniform = std::move(probs);
  return s;
}

TransitionSpec TransitionSpec::explicit_nodes(std::vector<std::vector<double>> probs) {
  TransitionSpec s;
  s.per_node = std::move(probs);
  return s;
}

FiniteFilteredSpace FiniteFilteredSpace::build(int depth, int branching,
                                               const TransitionSpec& probs) {
  if (depth < 0) throw ValidationError("depth must be non-negative");
  if (branching < 2) throw ValidationError("branching must be at least 2");
  if (probs.uniform.empty() == probs.per_node.empty() && depth > 0)
    throw ValidationError("exactly one of uniform / per-node transition probabilities is required");

  FiniteFilteredSpace s;
  s.depth_ = depth;
  s.branching_ = branching;
  s.level_offset_.resize(static_cast<std::size_t>(depth) + 2);
  std::size_t width = 1;
  s.level_offset_[0] = 0;
  for (int k = 0; k <= depth; ++k) {
    s.level_offset_[k + 1] = s.level_offset_[k] + width;
    if (s.level_offset_[k + 1] > kMaxNodes)
      throw ValidationError("tree too large: more than " + std::to_string(kMaxNodes) + " nodes");
    width *= static_cast<std::size_t>(branching);
  }
  const std::size_t n = s.level_offset_.back();
  const std::size_t internal = s.level_offset_[depth];

  if (!probs.uniform.empty()) {
    validate_distribution(probs.uniform, branching, "uniform transitions");
  } else if (depth > 0) {
    if (probs.per_node.size() != internal)
      throw ValidationError("per-node transitions: expected " + std::to_string(internal) +
                            " distributions, got " + std::to_string(probs.per_node.size()));
    for (std::size_t i = 0; i < internal; ++i)
      validate_distribution(probs.per_node[i], branching, "node " + std::to_string(i));
  }

  s.level_.resize(n);
  s.parent_.assign(n, kNoNode);
  s.edge_.assign(n, 1.0);
  s.prob_.assign(n, 1.0);
  for (int k = 0; k <= depth; ++k)
    for (NodeId v = s.level_offset_[k]; v < s.level_offset_[k + 1]; ++v) s.level_[v] = k;

  for (NodeId v = 0; v < internal; ++v) {
    const auto& dist = probs.uniform.empty() ? probs.per_node[v] : probs.uniform;
    for (int c = 0; c < branching; ++c) {
      const NodeId ch = s.child(v, c);
      s.parent_[ch] = v;
      s.edge_[ch] = dist[static_cast<std::size_t>(c)];
      s.prob_[ch] = s.prob_[v] * s.edge_[ch];
    }
  }
  return s;
}

std::size_t FiniteFilteredSpace::level_size(int level) const {
  if (level < 0 || level > depth_) throw ValidationError("level out of range");
  return level_offset_[level + 1] - level_offset_[level];
}

NodeId FiniteFilteredSpace::level_begin(int level) const {
  if (level < 0 || level > depth_) throw ValidationError("level out of range");
  return level_offset_[level];
}

NodeId FiniteFilteredSpace::child(NodeId node, int c) const {
  const int k = level_[node];
  const std::size_t pos = node - level_offset_[k];
  return level_offset_[k + 1] + pos * static_cast<std::size_t>(branching_) +
         static_cast<std::size_t>(c);
}

NodeId FiniteFilteredSpace::ancestor_at(NodeId node, int level) const {
  if (level < 0 || level > level_[node]) throw ValidationError("ancestor level out of range");
  while (level_[node] > level) node = parent_[node];
  return node;
}

bool FiniteFilteredSpace::is_descendant(NodeId node, NodeId ancestor) const {
  return level_[node] >= level_[ancestor] && ancestor_at(node, level_[ancestor]) == ancestor;
}

std::vector<double> FiniteFilteredSpace::transitions(NodeId node) const {
  std::vector<double> out;
  if (is_leaf(node)) return out;
  for (int c = 0; c < branching_; ++c) out.push_back(edge_[child(node, c)]);
  return out;
}

std::vector<double> FiniteFilteredSpace::cond_expectation(std::span<const double> values,
                                                          int from_level, int to_level) const {
  if (from_level < 0 || from_level > depth_ || to_level < 0 || to_level > from_level)
    throw ValidationError("conditional expectation: level out of range");
  if (values.size() != level_size(from_level))
    throw ValidationError("conditional expectation: expected " +
                          std::to_string(level_size(from_level)) + " values");
  std::vector<double> cur(values.begin(), values.end());
  for (int k = from_level - 1; k >= to_level; --k) {
    std::vector<double> next(level_size(k), 0.0);
    const NodeId child_base = level_offset_[k + 1];
    for (std::size_t i = 0; i < next.size(); ++i) {
      double acc = 0.0;
      for (int c = 0; c < branching_; ++c) {
        const std::size_t j = i * static_cast<std::size_t>(branching_) + static_cast<std::size_t>(c);
        acc += edge_[child_base + j] * cur[j];
      }
      next[i] = acc;
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace bmo::filtration

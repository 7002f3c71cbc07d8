#include "bmo/filtration/stopping.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "bmo/error.hpp"

namespace bmo::filtration {

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) noexcept {
  if (a == 0 || b == 0) return 0;
  if (a > kSat / b) return kSat;
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) noexcept {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r = sat_mul(r, base);
    if (r == kSat) break;
  }
  return r;
}

void check_window(const FiniteFilteredSpace& space, int s, int t) {
  if (s < 0 || t > space.depth() || s > t)
    throw ValidationError("stopping window [" + std::to_string(s) + ", " + std::to_string(t) +
                          "] is not inside [0, " + std::to_string(space.depth()) + "]");
}

void require_feasible(std::uint64_t count, std::uint64_t cap) {
  if (count > cap) throw EnumerationInfeasible(count, cap, count == kSat);
}

// Cartesian product of the children's cut lists, plus the cut {node}.
std::vector<std::vector<NodeId>> cuts_below(const FiniteFilteredSpace& space, NodeId node, int t) {
  std::vector<std::vector<NodeId>> out;
  out.push_back({node});
  if (space.level_of(node) >= t) return out;

  std::vector<std::vector<std::vector<NodeId>>> per_child;
  per_child.reserve(static_cast<std::size_t>(space.branching()));
  for (int c = 0; c < space.branching(); ++c)
    per_child.push_back(cuts_below(space, space.child(node, c), t));

  std::vector<std::size_t> idx(per_child.size(), 0);
  while (true) {
    std::vector<NodeId> cut;
    for (std::size_t c = 0; c < per_child.size(); ++c) {
      const auto& part = per_child[c][idx[c]];
      cut.insert(cut.end(), part.begin(), part.end());
    }
    out.push_back(std::move(cut));
    std::size_t c = 0;
    while (c < idx.size() && ++idx[c] == per_child[c].size()) idx[c++] = 0;
    if (c == idx.size()) break;
  }
  return out;
}

}  // namespace

StoppingTime StoppingTime::from_cut(const FiniteFilteredSpace& space, int s, int t,
                                    std::span<const NodeId> cut) {
  check_window(space, s, t);
  for (NodeId n : cut)
    if (n >= space.node_count() || space.level_of(n) < s || space.level_of(n) > t)
      throw ValidationError("stop atom outside the window");
  StoppingTime st = unchecked(space, s, t, cut);
  // Each path must meet exactly one labelled node.
  const int depth = space.depth();
  for (NodeId leaf = space.level_begin(depth); leaf < space.level_end(depth); ++leaf) {
    int hits = 0;
    for (int k = s; k <= t; ++k) hits += st.labels_[space.ancestor_at(leaf, k)];
    if (hits != 1) throw ValidationError("stop atoms do not form a cut of the window");
  }
  return st;
}

StoppingTime StoppingTime::unchecked(const FiniteFilteredSpace& space, int s, int t,
                                     std::span<const NodeId> cut) {
  StoppingTime st;
  st.s_ = s;
  st.t_ = t;
  st.labels_.assign(space.node_count(), 0);
  for (NodeId n : cut) st.labels_[n] = 1;
  return st;
}

StoppingTime StoppingTime::constant(const FiniteFilteredSpace& space, int level) {
  std::vector<NodeId> cut;
  for (NodeId n = space.level_begin(level); n < space.level_end(level); ++n) cut.push_back(n);
  return from_cut(space, level, level, cut);
}

std::vector<NodeId> StoppingTime::atoms(const FiniteFilteredSpace& space) const {
  std::vector<NodeId> out;
  const int depth = space.depth();
  for (NodeId leaf = space.level_begin(depth); leaf < space.level_end(depth); ++leaf)
    out.push_back(stop_node(space, leaf));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NodeId StoppingTime::stop_node(const FiniteFilteredSpace& space, NodeId leaf) const {
  for (int k = s_; k < t_; ++k) {
    const NodeId a = space.ancestor_at(leaf, k);
    if (labels_[a]) return a;
  }
  return space.ancestor_at(leaf, t_);
}

std::uint64_t subtree_stopping_count(int branching, int width) noexcept {
  std::uint64_t n = 1;
  for (int d = 0; d < width; ++d) {
    n = sat_pow(n, static_cast<std::uint64_t>(branching));
    n = n == kSat ? kSat : n + 1;
  }
  return n;
}

std::uint64_t stopping_time_count(const FiniteFilteredSpace& space, int s, int t) {
  check_window(space, s, t);
  return sat_pow(subtree_stopping_count(space.branching(), t - s), space.level_size(s));
}

std::vector<std::vector<NodeId>> enumerate_cuts(const FiniteFilteredSpace& space, NodeId node,
                                                int t, std::uint64_t cap) {
  check_window(space, space.level_of(node), t);
  require_feasible(subtree_stopping_count(space.branching(), t - space.level_of(node)), cap);
  return cuts_below(space, node, t);
}

std::vector<StoppingTime> enumerate_stopping_times(const FiniteFilteredSpace& space, int s, int t,
                                                   std::uint64_t cap) {
  require_feasible(stopping_time_count(space, s, t), cap);

  std::vector<std::vector<std::vector<NodeId>>> per_atom;
  for (NodeId a = space.level_begin(s); a < space.level_end(s); ++a)
    per_atom.push_back(cuts_below(space, a, t));

  std::vector<StoppingTime> out;
  std::vector<std::size_t> idx(per_atom.size(), 0);
  while (true) {
    std::vector<NodeId> cut;
    for (std::size_t i = 0; i < per_atom.size(); ++i)
      cut.insert(cut.end(), per_atom[i][idx[i]].begin(), per_atom[i][idx[i]].end());
    out.push_back(StoppingTime::unchecked(space, s, t, cut));
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == per_atom[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return out;
}

}  // namespace bmo::filtration

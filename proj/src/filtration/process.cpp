#include "bmo/filtration/process.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bmo/error.hpp"

namespace bmo::filtration {

AdaptedProcess::AdaptedProcess(const FiniteFilteredSpace& space, std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.size() != space.node_count())
    throw ValidationError("process needs one value per node (" +
                          std::to_string(space.node_count()) + "), got " +
                          std::to_string(values_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw ValidationError("process values must be finite");
}

AdaptedProcess AdaptedProcess::constant(const FiniteFilteredSpace& space, double c) {
  return AdaptedProcess(space, std::vector<double>(space.node_count(), c));
}

AdaptedProcess AdaptedProcess::deterministic(const FiniteFilteredSpace& space,
                                             std::span<const double> by_level) {
  if (by_level.size() != static_cast<std::size_t>(space.depth()) + 1)
    throw ValidationError("deterministic process needs depth + 1 values");
  std::vector<double> v(space.node_count());
  for (NodeId n = 0; n < v.size(); ++n) v[n] = by_level[static_cast<std::size_t>(space.level_of(n))];
  return AdaptedProcess(space, std::move(v));
}

AdaptedProcess AdaptedProcess::from_path(const FiniteFilteredSpace& space,
                                         const std::function<double(std::span<const int>)>& fn) {
  std::vector<double> v(space.node_count());
  for (NodeId n = 0; n < v.size(); ++n) {
    const auto path = path_to(space, n);
    v[n] = fn(path);
  }
  return AdaptedProcess(space, std::move(v));
}

AdaptedProcess AdaptedProcess::martingale(const FiniteFilteredSpace& space,
                                          std::span<const double> leaf_values) {
  std::vector<double> v(space.node_count());
  for (int k = 0; k <= space.depth(); ++k) {
    const auto level = space.cond_expectation(leaf_values, k);
    std::copy(level.begin(), level.end(), v.begin() + static_cast<std::ptrdiff_t>(space.level_begin(k)));
  }
  return AdaptedProcess(space, std::move(v));
}

std::vector<double> AdaptedProcess::level_values(const FiniteFilteredSpace& space, int level) const {
  const auto b = static_cast<std::ptrdiff_t>(space.level_begin(level));
  const auto e = static_cast<std::ptrdiff_t>(space.level_end(level));
  return {values_.begin() + b, values_.begin() + e};
}

std::vector<int> path_to(const FiniteFilteredSpace& space, NodeId node) {
  std::vector<int> path(static_cast<std::size_t>(space.level_of(node)));
  while (space.parent(node) != kNoNode) {
    const NodeId p = space.parent(node);
    const NodeId first = space.child(p, 0);
    path[static_cast<std::size_t>(space.level_of(p))] = static_cast<int>(node - first);
    node = p;
  }
  return path;
}

AdaptedProcess maximal_process(const FiniteFilteredSpace& space, const AdaptedProcess& v) {
  std::vector<double> out(space.node_count(), 0.0);
  const double v0 = v[space.root()];
  for (NodeId n = 1; n < out.size(); ++n)
    out[n] = std::max(out[space.parent(n)], std::fabs(v[n] - v0));
  return AdaptedProcess(space, std::move(out));
}

bool is_nondecreasing(const FiniteFilteredSpace& space, const AdaptedProcess& v) {
  for (NodeId n = 1; n < space.node_count(); ++n)
    if (v[n] < v[space.parent(n)]) return false;
  return true;
}

double max_pathwise_jump(const FiniteFilteredSpace& space, const AdaptedProcess& v) {
  double m = 0.0;
  const int depth = space.depth();
  for (NodeId leaf = space.level_begin(depth); leaf < space.level_end(depth); ++leaf) {
    for (NodeId n = leaf; space.parent(n) != kNoNode; n = space.parent(n))
      m = std::max(m, std::fabs(v[n] - v[space.parent(n)]));
  }
  return m;
}

}  // namespace bmo::filtration

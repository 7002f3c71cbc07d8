#include "bmo/filtration/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bmo/error.hpp"

namespace bmo::filtration {

namespace {

void check_window(const FiniteFilteredSpace& space, int s, int t) {
  if (s < 0 || t > space.depth() || s > t) throw ValidationError("window out of range");
}

double cut_value(const FiniteFilteredSpace& space, const AdaptedProcess& v, NodeId node,
                 const std::vector<NodeId>& cut, double center) {
  double acc = 0.0;
  for (NodeId n : cut) acc += space.prob(n) * std::fabs(v[n] - center);
  return acc / space.prob(node);
}

double snell(const FiniteFilteredSpace& space, const AdaptedProcess& v, NodeId node,
             double center, int t) {
  const double stop = std::fabs(v[node] - center);
  if (space.level_of(node) >= t) return stop;
  double cont = 0.0;
  for (int c = 0; c < space.branching(); ++c) {
    const NodeId ch = space.child(node, c);
    cont += space.edge_prob(ch) * snell(space, v, ch, center, t);
  }
  return std::max(stop, cont);
}

// Per node a of level j <= t: the sup with center V_{a-} (grid stop) and with
// center V_a (stop strictly inside (j, j+1)).
struct NodeSups {
  double grid = 0.0;
  double inner = 0.0;
};

template <class Sup>
double rho_from_sups(const FiniteFilteredSpace& space, int s, int t, bool include_left_jump,
                     Sup&& sup) {
  double best = 0.0;
  for (int j = s; j <= t; ++j) {
    for (NodeId a = space.level_begin(j); a < space.level_end(j); ++a) {
      const NodeSups ns = sup(a);
      best = std::max(best, ns.inner);
      if (j > s || include_left_jump) best = std::max(best, ns.grid);
    }
  }
  return best;
}

}  // namespace

double sup_expected_deviation(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                              NodeId node, double center, int t, std::uint64_t cap) {
  double best = 0.0;
  for (const auto& cut : enumerate_cuts(space, node, t, cap))
    best = std::max(best, cut_value(space, v, node, cut, center));
  return best;
}

double sup_expected_deviation_snell(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                                    NodeId node, double center, int t) {
  check_window(space, space.level_of(node), t);
  return snell(space, v, node, center, t);
}

double rho_exact(const FiniteFilteredSpace& space, const AdaptedProcess& v, int s, int t,
                 const RhoOptions& options) {
  check_window(space, s, t);
  // Feasibility is decided by the widest subtree window.
  const std::uint64_t count = subtree_stopping_count(space.branching(), t - s);
  if (count > options.cap)
    throw EnumerationInfeasible(count, options.cap,
                                count == std::numeric_limits<std::uint64_t>::max());
  return rho_from_sups(space, s, t, options.include_left_jump, [&](NodeId a) {
    NodeSups ns;
    const double grid_center = v.left_limit(space, a);
    const double inner_center = v[a];
    for (const auto& cut : enumerate_cuts(space, a, t, options.cap)) {
      ns.grid = std::max(ns.grid, cut_value(space, v, a, cut, grid_center));
      ns.inner = std::max(ns.inner, cut_value(space, v, a, cut, inner_center));
    }
    return ns;
  });
}

double rho_snell(const FiniteFilteredSpace& space, const AdaptedProcess& v, int s, int t,
                 bool include_left_jump) {
  check_window(space, s, t);
  return rho_from_sups(space, s, t, include_left_jump, [&](NodeId a) {
    return NodeSups{snell(space, v, a, v.left_limit(space, a), t), snell(space, v, a, v[a], t)};
  });
}

double kappa_exact(const FiniteFilteredSpace& space, const AdaptedProcess& v) {
  double k = 0.0;
  for (NodeId n = 1; n < space.node_count(); ++n)
    k = std::max(k, std::fabs(v[n] - v[space.parent(n)]));
  return k;
}

OscillationData oscillation_data(const FiniteFilteredSpace& space, const AdaptedProcess& v,
                                 const RhoOptions& options) {
  const int depth = space.depth();
  const auto n = static_cast<std::size_t>(depth) + 1;
  OscillationData out;
  out.rho = GridMatrix(n);

  // Level-wise maxima of the per-node sups, computed once per right end t.
  for (int t = 0; t <= depth; ++t) {
    std::vector<double> grid_max(n, 0.0), inner_max(n, 0.0);
    for (int j = 0; j <= t; ++j) {
      for (NodeId a = space.level_begin(j); a < space.level_end(j); ++a) {
        const double gc = v.left_limit(space, a);
        const double ic = v[a];
        for (const auto& cut : enumerate_cuts(space, a, t, options.cap)) {
          grid_max[j] = std::max(grid_max[j], cut_value(space, v, a, cut, gc));
          inner_max[j] = std::max(inner_max[j], cut_value(space, v, a, cut, ic));
        }
      }
    }
    for (int s = t; s >= 0; --s) {
      double r = inner_max[s];
      if (options.include_left_jump) r = std::max(r, grid_max[s]);
      if (s < t) r = std::max({r, out.rho(s + 1, t), grid_max[s + 1]});
      out.rho(s, t) = r;
    }
  }
  out.kappa = kappa_exact(space, v);
  out.max_jump = max_pathwise_jump(space, v);
  return out;
}

}  // namespace bmo::filtration

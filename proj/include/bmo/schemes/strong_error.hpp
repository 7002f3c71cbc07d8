#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bmo/mc/ensemble.hpp"
#include "bmo/mc/rate_fit.hpp"
#include "bmo/schemes/sde.hpp"
#include "bmo/schemes/taming.hpp"

namespace bmo::schemes {

struct StrongErrorRow {
  std::size_t n = 0;
  /// Mean over paths of sup_t |X^n_t - X^ref_t| on the fine grid.
  double mean = 0.0;
  double std_error = 0.0;
  double l2 = 0.0;
  double l4 = 0.0;
};

struct StrongErrorResult {
  std::vector<StrongErrorRow> rows;
  /// Fit of the means against n; absent when fewer than three means are
  /// positive.
  std::optional<mc::RateFit> fit;
  std::size_t reference_mesh = 0;
  std::size_t n_paths = 0;
};

/// Coupled self-convergence: for each path, the scheme at every n in ns and
/// the reference at fine_factor * max(ns) run on the same fine increments in
/// one task. The ensemble's fine grid must refine the reference mesh.
StrongErrorResult strong_error(const SdeModel& model, const TamingPolicy& taming,
                               std::span<const std::size_t> ns, std::size_t fine_factor,
                               const mc::PathEnsemble& ensemble, unsigned jobs = 1);

/// True when each mean is at most the previous one plus `sigmas` combined
/// standard errors.
bool nonincreasing_within(std::span<const StrongErrorRow> rows, double sigmas = 1.0);

}  // namespace bmo::schemes

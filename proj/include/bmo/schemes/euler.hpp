#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "bmo/mc/ensemble.hpp"
#include "bmo/schemes/sde.hpp"
#include "bmo/schemes/taming.hpp"

namespace bmo::schemes {

/// How a mesh of step 1/n sits on an ensemble's fine grid.
struct MeshGeometry {
  std::size_t n = 1;
  std::size_t cells = 1;
  /// Fine steps per mesh cell.
  std::size_t stride = 1;
  std::size_t fine_steps = 1;
  double dt = 1.0;
};

/// Throws ValidationError ("mesh mismatch") unless horizon * n is a whole
/// number of cells and the fine grid splits each cell evenly.
MeshGeometry mesh_geometry(std::size_t n, const mc::EnsembleShape& shape);

/// Tamed Euler-Maruyama on one path: drift and diffusion frozen at the last
/// mesh point, the solution advanced on every fine step. `increments` holds
/// fine_steps x d Brownian increments; `out` receives (fine_steps + 1) x d
/// values.
void tamed_euler_path(const SdeModel& model, const Field& drift, const MeshGeometry& mesh,
                      std::span<const double> increments, std::span<double> out);

struct SchemeRun {
  std::size_t n = 1;
  std::size_t fine_steps = 1;
  std::size_t dim = 1;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  double level = 0.0;
  std::vector<double> values;

  std::span<const double> path(std::size_t i) const {
    const std::size_t len = (fine_steps + 1) * dim;
    return std::span<const double>(values).subspan(i * len, len);
  }
};

/// Solves every path of the ensemble with b^n = tame_drift(b, n, q, taming).
SchemeRun tamed_euler_solve(const SdeModel& model, const TamingPolicy& taming, std::size_t n,
                            const mc::PathEnsemble& ensemble, unsigned jobs = 1,
                            double q = std::numeric_limits<double>::infinity());

}  // namespace bmo::schemes

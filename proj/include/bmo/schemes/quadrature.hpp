#pragma once

#include <span>
#include <vector>

#include "bmo/mc/ensemble.hpp"
#include "bmo/mc/estimators.hpp"
#include "bmo/mc/functional.hpp"

namespace bmo::schemes {

/// V^n_t = int_0^t [f(r, B_r) - f(r, B_{k_n(r)})] dr at every fine time, for
/// every path; B starts at 0.
struct QuadratureTrajectories {
  std::size_t n = 1;
  std::size_t fine_steps = 1;
  double dt = 1.0;
  std::size_t n_paths = 0;
  std::vector<double> values;

  std::size_t points_per_path() const noexcept { return fine_steps + 1; }
  std::span<const double> path(std::size_t i) const {
    return std::span<const double>(values).subspan(i * points_per_path(), points_per_path());
  }
};

/// Left-point Riemann sums on the ensemble's fine grid, which must refine
/// the mesh {j/n} (ValidationError otherwise). One-dimensional ensembles only.
QuadratureTrajectories quadrature_error(const mc::Integrand& f, const mc::PathEnsemble& ensemble,
                                        std::size_t n, unsigned jobs = 1);

/// V^n at the horizon for every path, without storing trajectories.
std::vector<double> quadrature_error_terminal(const mc::Integrand& f,
                                              const mc::PathEnsemble& ensemble, std::size_t n,
                                              unsigned jobs = 1);

/// E sup_t |Y_t|^m over trajectories stored back to back, points_per_path
/// values each.
mc::MomentEstimate sup_process_moment(std::span<const double> trajectories,
                                      std::size_t points_per_path, double m);

}  // namespace bmo::schemes

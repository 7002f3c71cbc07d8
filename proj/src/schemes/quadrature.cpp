#include "bmo/schemes/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "bmo/error.hpp"
#include "bmo/parallel.hpp"
#include "bmo/schemes/euler.hpp"
#include "bmo/simd/kernels.hpp"

namespace bmo::schemes {

namespace {

void require_scalar(const mc::PathEnsemble& ensemble) {
  if (ensemble.shape().dim != 1)
    throw ValidationError("quadrature error: one-dimensional ensemble required");
}

// B at fine times 0, dt, ..., (m - 1) dt.
void brownian_path(const mc::PathEnsemble& ensemble, std::size_t p, std::vector<double>& inc,
                   std::vector<double>& b) {
  const std::size_t m = ensemble.shape().n_steps;
  inc.resize(m);
  b.resize(m);
  ensemble.fill_increments(p, inc);
  b[0] = 0.0;
  for (std::size_t k = 1; k < m; ++k) b[k] = b[k - 1] + inc[k - 1];
}

}  // namespace

QuadratureTrajectories quadrature_error(const mc::Integrand& f, const mc::PathEnsemble& ensemble,
                                        std::size_t n, unsigned jobs) {
  require_scalar(ensemble);
  const MeshGeometry mesh = mesh_geometry(n, ensemble.shape());
  QuadratureTrajectories out;
  out.n = n;
  out.fine_steps = mesh.fine_steps;
  out.dt = mesh.dt;
  out.n_paths = ensemble.shape().n_paths;
  out.values.resize(out.n_paths * out.points_per_path());
  parallel_for(out.n_paths, jobs, [&](std::size_t p) {
    thread_local std::vector<double> inc, b, diff;
    brownian_path(ensemble, p, inc, b);
    diff.resize(b.size());
    double* v = out.values.data() + p * out.points_per_path();
    v[0] = 0.0;
    if (const auto map = f.point_map()) {
      simd::kernels().frozen_diff(b.data(), b.size(), mesh.stride, *map, diff.data());
    } else {
      for (std::size_t k = 0; k < b.size(); ++k) {
        const double r = static_cast<double>(k) * mesh.dt;
        diff[k] = f(r, b[k]) - f(r, b[mesh.stride * (k / mesh.stride)]);
      }
    }
    for (std::size_t k = 0; k < mesh.fine_steps; ++k) v[k + 1] = v[k] + diff[k] * mesh.dt;
  });
  return out;
}

std::vector<double> quadrature_error_terminal(const mc::Integrand& f,
                                              const mc::PathEnsemble& ensemble, std::size_t n,
                                              unsigned jobs) {
  require_scalar(ensemble);
  const MeshGeometry mesh = mesh_geometry(n, ensemble.shape());
  const auto functional = mc::PathFunctional::quadrature_error(f, n);
  std::vector<double> out(ensemble.shape().n_paths);
  parallel_for(out.size(), jobs, [&](std::size_t p) {
    thread_local std::vector<double> inc, b, scratch;
    brownian_path(ensemble, p, inc, b);
    scratch.resize(b.size());
    out[p] = mc::evaluate(functional, 0.0, mesh.dt, b, scratch);
  });
  return out;
}

mc::MomentEstimate sup_process_moment(std::span<const double> trajectories,
                                      std::size_t points_per_path, double m) {
  if (points_per_path < 1 || trajectories.size() % points_per_path != 0)
    throw ValidationError("sup_process_moment: trajectories are not on a common grid");
  if (!(m > 0.0)) throw ValidationError("sup_process_moment: m must be positive");
  const std::size_t n_paths = trajectories.size() / points_per_path;
  std::vector<double> sups(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) {
    double s = 0.0;
    for (std::size_t k = 0; k < points_per_path; ++k)
      s = std::max(s, std::fabs(trajectories[p * points_per_path + k]));
    sups[p] = std::pow(s, m);
  }
  return mc::mean_estimate(sups);
}

}  // namespace bmo::schemes

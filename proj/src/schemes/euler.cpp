#include "bmo/schemes/euler.hpp"

#include <cmath>
#include <string>

#include "bmo/error.hpp"
#include "bmo/parallel.hpp"

namespace bmo::schemes {

MeshGeometry mesh_geometry(std::size_t n, const mc::EnsembleShape& shape) {
  shape.validate();
  if (n < 1) throw ValidationError("mesh mismatch: n must be >= 1");
  const double cells = shape.horizon * static_cast<double>(n);
  const double rounded = std::round(cells);
  if (rounded < 1.0 || std::fabs(cells - rounded) > 1e-9 * rounded)
    throw ValidationError("mesh mismatch: horizon " + std::to_string(shape.horizon) +
                          " is not a whole number of cells of 1/" + std::to_string(n));
  MeshGeometry g;
  g.n = n;
  g.cells = static_cast<std::size_t>(rounded);
  g.fine_steps = shape.n_steps;
  if (g.fine_steps % g.cells != 0)
    throw ValidationError("mesh mismatch: " + std::to_string(g.fine_steps) +
                          " fine steps do not refine " + std::to_string(g.cells) + " cells");
  g.stride = g.fine_steps / g.cells;
  g.dt = shape.dt();
  return g;
}

void tamed_euler_path(const SdeModel& model, const Field& drift, const MeshGeometry& mesh,
                      std::span<const double> increments, std::span<double> out) {
  const std::size_t d = model.dim;
  if (increments.size() != mesh.fine_steps * d || out.size() != (mesh.fine_steps + 1) * d)
    throw ValidationError("tamed_euler_path: buffer sizes do not match the mesh");
  std::vector<double> x(model.x0), b(d), sig(d * d);
  std::copy(x.begin(), x.end(), out.begin());
  std::size_t k = 0;
  for (std::size_t c = 0; c < mesh.cells; ++c) {
    const double t = static_cast<double>(c) / static_cast<double>(mesh.n);
    drift(t, x, b);
    model.diffusion(t, x, sig);
    for (std::size_t step = 0; step < mesh.stride; ++step, ++k) {
      const double* db = increments.data() + k * d;
      for (std::size_t i = 0; i < d; ++i) {
        double noise = 0.0;
        for (std::size_t j = 0; j < d; ++j) noise = noise + sig[i * d + j] * db[j];
        x[i] = x[i] + (b[i] * mesh.dt + noise);
      }
      std::copy(x.begin(), x.end(), out.begin() + static_cast<std::ptrdiff_t>((k + 1) * d));
    }
  }
}

SchemeRun tamed_euler_solve(const SdeModel& model, const TamingPolicy& taming, std::size_t n,
                            const mc::PathEnsemble& ensemble, unsigned jobs, double q) {
  model.validate();
  const auto& shape = ensemble.shape();
  if (shape.dim != model.dim) throw ValidationError("ensemble dimension differs from the model");
  const MeshGeometry mesh = mesh_geometry(n, shape);
  const TamedDrift tamed = tame_drift(model.drift, static_cast<double>(n), q, taming);

  SchemeRun run;
  run.n = n;
  run.fine_steps = mesh.fine_steps;
  run.dim = model.dim;
  run.n_paths = shape.n_paths;
  run.seed = shape.seed;
  run.level = tamed.level;
  const std::size_t len = (mesh.fine_steps + 1) * model.dim;
  run.values.resize(shape.n_paths * len);
  parallel_for(shape.n_paths, jobs, [&](std::size_t p) {
    thread_local std::vector<double> inc;
    inc.resize(shape.values_per_path());
    ensemble.fill_increments(p, inc);
    tamed_euler_path(model, tamed.drift, mesh, inc,
                     std::span<double>(run.values).subspan(p * len, len));
  });
  return run;
}

}  // namespace bmo::schemes

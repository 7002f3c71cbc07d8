#include "bmo/schemes/strong_error.hpp"

#include <algorithm>
#include <cmath>

#include "bmo/error.hpp"
#include "bmo/mc/estimators.hpp"
#include "bmo/numeric.hpp"
#include "bmo/parallel.hpp"
#include "bmo/schemes/euler.hpp"

namespace bmo::schemes {

StrongErrorResult strong_error(const SdeModel& model, const TamingPolicy& taming,
                               std::span<const std::size_t> ns, std::size_t fine_factor,
                               const mc::PathEnsemble& ensemble, unsigned jobs) {
  model.validate();
  if (ns.empty()) throw ValidationError("strong_error: no meshes given");
  if (fine_factor < 1) throw ValidationError("strong_error: fine_factor must be >= 1");
  const auto& shape = ensemble.shape();
  if (shape.dim != model.dim) throw ValidationError("ensemble dimension differs from the model");

  const std::size_t n_ref = fine_factor * *std::max_element(ns.begin(), ns.end());
  const MeshGeometry ref_mesh = mesh_geometry(n_ref, shape);
  const TamedDrift ref_drift = tame_drift(model.drift, static_cast<double>(n_ref),
                                          std::numeric_limits<double>::infinity(), taming);
  std::vector<MeshGeometry> meshes;
  std::vector<TamedDrift> drifts;
  for (std::size_t n : ns) {
    meshes.push_back(mesh_geometry(n, shape));
    drifts.push_back(tame_drift(model.drift, static_cast<double>(n),
                                std::numeric_limits<double>::infinity(), taming));
  }

  const std::size_t n_paths = shape.n_paths;
  const std::size_t len = (shape.n_steps + 1) * model.dim;
  std::vector<double> errors(ns.size() * n_paths);
  parallel_for(n_paths, jobs, [&](std::size_t p) {
    thread_local std::vector<double> inc, ref, coarse;
    inc.resize(shape.values_per_path());
    ref.resize(len);
    coarse.resize(len);
    ensemble.fill_increments(p, inc);
    tamed_euler_path(model, ref_drift.drift, ref_mesh, inc, ref);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      tamed_euler_path(model, drifts[i].drift, meshes[i], inc, coarse);
      double sup = 0.0;
      for (std::size_t k = 0; k < len; ++k) sup = std::max(sup, std::fabs(coarse[k] - ref[k]));
      errors[i * n_paths + p] = sup;
    }
  });

  StrongErrorResult out;
  out.reference_mesh = n_ref;
  out.n_paths = n_paths;
  std::vector<double> pos_ns, pos_means;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto e = std::span<const double>(errors).subspan(i * n_paths, n_paths);
    const auto est = mc::mean_estimate(e);
    std::vector<double> p2(n_paths), p4(n_paths);
    for (std::size_t k = 0; k < n_paths; ++k) {
      p2[k] = e[k] * e[k];
      p4[k] = p2[k] * p2[k];
    }
    StrongErrorRow row;
    row.n = ns[i];
    row.mean = est.value;
    row.std_error = est.std_error;
    row.l2 = std::sqrt(pairwise_sum(p2) / static_cast<double>(n_paths));
    row.l4 = std::sqrt(std::sqrt(pairwise_sum(p4) / static_cast<double>(n_paths)));
    out.rows.push_back(row);
    if (row.mean > 0.0) {
      pos_ns.push_back(static_cast<double>(ns[i]));
      pos_means.push_back(row.mean);
    }
  }
  if (pos_ns.size() >= 3 && pos_ns.size() == ns.size()) out.fit = mc::rate_fit(pos_ns, pos_means);
  return out;
}

bool nonincreasing_within(std::span<const StrongErrorRow> rows, double sigmas) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double se = std::hypot(rows[i].std_error, rows[i - 1].std_error);
    if (rows[i].mean > rows[i - 1].mean + sigmas * se) return false;
  }
  return true;
}

}  // namespace bmo::schemes

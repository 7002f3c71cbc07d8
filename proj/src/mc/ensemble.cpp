#include "bmo/mc/ensemble.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bmo/error.hpp"
#include "bmo/mc/rng.hpp"
#include "bmo/parallel.hpp"

namespace bmo::mc {

void EnsembleShape::validate() const {
  if (n_paths < 1 || n_steps < 1 || dim < 1)
    throw ValidationError("ensemble: n_paths, n_steps and dim must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ValidationError("ensemble: horizon must be positive and finite");
}

PathEnsemble PathEnsemble::streamed(const EnsembleShape& shape) {
  shape.validate();
  PathEnsemble e;
  e.shape_ = shape;
  return e;
}

PathEnsemble PathEnsemble::materialized(const EnsembleShape& shape, std::size_t max_bytes,
                                        unsigned jobs) {
  shape.validate();
  const std::size_t per_path = shape.values_per_path();
  const std::size_t limit = max_bytes / sizeof(double);
  if (per_path > limit || shape.n_paths > limit / per_path)
    throw ResourceLimitError("ensemble: " + std::to_string(shape.n_paths) + " x " +
                             std::to_string(per_path) + " increments exceed the cap of " +
                             std::to_string(max_bytes) + " bytes");
  PathEnsemble e;
  e.shape_ = shape;
  e.data_.resize(shape.n_paths * per_path);
  parallel_for(shape.n_paths, jobs, [&](std::size_t i) {
    NormalStream(derive_seed(shape.seed, i))
        .fill(std::span<double>(e.data_).subspan(i * per_path, per_path), std::sqrt(shape.dt()));
  });
  return e;
}

void PathEnsemble::fill_increments(std::size_t path, std::span<double> out) const {
  if (path >= shape_.n_paths) throw ValidationError("ensemble: path index out of range");
  if (out.size() != shape_.values_per_path())
    throw ValidationError("ensemble: output span has the wrong length");
  if (is_materialized()) {
    const auto src = this->path(path);
    std::copy(src.begin(), src.end(), out.begin());
    return;
  }
  NormalStream(derive_seed(shape_.seed, path)).fill(out, std::sqrt(shape_.dt()));
}

std::span<const double> PathEnsemble::path(std::size_t i) const {
  if (!is_materialized()) throw ValidationError("ensemble: increments were not materialized");
  if (i >= shape_.n_paths) throw ValidationError("ensemble: path index out of range");
  const std::size_t per_path = shape_.values_per_path();
  return std::span<const double>(data_).subspan(i * per_path, per_path);
}

nlohmann::json PathEnsemble::metadata() const {
  return {{"seed", shape_.seed},       {"n_paths", shape_.n_paths},
          {"n_steps", shape_.n_steps}, {"dim", shape_.dim},
          {"horizon", shape_.horizon}, {"dt", shape_.dt()},
          {"seed_rule", "path i: mt19937_64(derive_seed(seed, i)), normals step-major"}};
}

PathEnsemble brownian_paths(std::size_t n_paths, std::size_t n_steps, std::size_t dim,
                            double horizon, std::uint64_t seed, std::size_t max_bytes) {
  return PathEnsemble::materialized({n_paths, n_steps, dim, horizon, seed}, max_bytes);
}

}  // namespace bmo::mc

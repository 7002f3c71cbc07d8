#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace bmo::mc {

inline constexpr std::size_t kDefaultMaxBytes = std::size_t{1} << 30;

struct EnsembleShape {
  std::size_t n_paths = 1;
  std::size_t n_steps = 1;
  std::size_t dim = 1;
  double horizon = 1.0;
  std::uint64_t seed = 0;

  double dt() const noexcept { return horizon / static_cast<double>(n_steps); }
  std::size_t values_per_path() const noexcept { return n_steps * dim; }
  /// Throws ValidationError unless every count is >= 1 and horizon > 0.
  void validate() const;
};

/// Brownian increments N(0, dt I), step-major within a path (step k occupies
/// dim consecutive values). Path i is drawn from its own engine seeded with
/// derive_seed(seed, i), so any path can be regenerated on its own.
class PathEnsemble {
 public:
  /// Lazy ensemble: increments are generated on demand.
  static PathEnsemble streamed(const EnsembleShape& shape);
  /// Ensemble holding every increment; throws ResourceLimitError when they
  /// need more than max_bytes.
  static PathEnsemble materialized(const EnsembleShape& shape,
                                   std::size_t max_bytes = kDefaultMaxBytes, unsigned jobs = 1);

  const EnsembleShape& shape() const noexcept { return shape_; }
  bool is_materialized() const noexcept { return !data_.empty(); }

  /// Writes path i's increments into out (size values_per_path()).
  void fill_increments(std::size_t path, std::span<double> out) const;
  /// Increments of path i; only for materialized ensembles.
  std::span<const double> path(std::size_t i) const;
  std::span<const double> increments() const noexcept { return data_; }

  /// {"seed", "n_paths", "n_steps", "dim", "horizon", "dt", "seed_rule"}.
  nlohmann::json metadata() const;

 private:
  EnsembleShape shape_;
  std::vector<double> data_;
};

/// Materialized ensemble with the shape given.
PathEnsemble brownian_paths(std::size_t n_paths, std::size_t n_steps, std::size_t dim,
                            double horizon, std::uint64_t seed,
                            std::size_t max_bytes = kDefaultMaxBytes);

}  // namespace bmo::mc

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bmo/filtration/oscillation.hpp"
#include "bmo/mc/functional.hpp"

namespace bmo::mc {

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_outer = 1;
  std::size_t n_inner = 0;
};

/// Sample mean and its standard error, both by pairwise summation.
MomentEstimate mean_estimate(std::span<const double> samples);

/// Stand-in for an essential supremum over outer samples.
enum class EssSupProxy { max, quantile };
const char* proxy_name(EssSupProxy proxy) noexcept;

struct ConditionalMomentOptions {
  std::size_t n_inner = 1000;
  /// Fine Riemann step.
  double dt = 1.0 / 4096;
  /// Estimates E|F|^order; order 1 or 2.
  int order = 1;
  EssSupProxy proxy = EssSupProxy::max;
  /// The quantile proxy takes the (1 - delta) empirical quantile.
  double delta = 0.01;
  unsigned jobs = 1;
};

struct ConditionalMoment {
  /// The proxy over outer samples, with the standard error of the inner mean
  /// it selected.
  MomentEstimate estimate;
  /// Inner mean per outer sample.
  std::vector<MomentEstimate> per_outer;
  EssSupProxy proxy = EssSupProxy::max;
  std::size_t selected_outer = 0;
};

/// For each outer state x, E|F(X^x)|^order over n_inner fresh Brownian paths
/// X^x started at x at time s, where F is the functional on [s, t]. Inner path
/// (i, j) is drawn from derive_seed(seed, i, j). Returns the ess-sup proxy of
/// the per-state means.
ConditionalMoment markov_conditional_moment(const PathFunctional& functional, double s, double t,
                                            std::span<const double> x_law,
                                            const ConditionalMomentOptions& options,
                                            std::uint64_t seed);

struct RhoGridOptions {
  ConditionalMomentOptions inner;
  /// Brownian motion starts here at time 0.
  double x0 = 0.0;
  /// Monotonicity is flagged beyond this many combined standard errors.
  double flag_sigmas = 3.0;
};

struct MonotoneFlag {
  std::size_t s_outer, t_outer, s_inner, t_inner;
  double excess_sigmas;
};

struct RhoGridEstimate {
  std::vector<double> grid;
  filtration::GridMatrix value;
  filtration::GridMatrix std_error;
  std::vector<MonotoneFlag> monotone_flags;
};

/// markov_conditional_moment for every grid pair s < t, with outer states
/// X_s = x0 + sqrt(s) Z_i, Z_i drawn from derive_seed(seed, 0, i); the inner
/// paths use derive_seed(seed + 1, i, j) for every pair. Diagonal entries are
/// zero.
RhoGridEstimate empirical_rho_grid(const PathFunctional& functional, std::span<const double> grid,
                                   std::size_t n_outer, const RhoGridOptions& options,
                                   std::uint64_t seed);

struct ExpMoment {
  MomentEstimate estimate;
  double truncation_hit_rate = 0.0;
};

/// Mean of min(exp(lambda x), truncation) over the samples. Throws
/// ValidationError on an empty sample or lambda <= 0.
ExpMoment exp_moment(std::span<const double> samples, double lambda, double truncation);

}  // namespace bmo::mc

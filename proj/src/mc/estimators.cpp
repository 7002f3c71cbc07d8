#include "bmo/mc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bmo/error.hpp"
#include "bmo/mc/rng.hpp"
#include "bmo/numeric.hpp"
#include "bmo/parallel.hpp"

namespace bmo::mc {

MomentEstimate mean_estimate(std::span<const double> samples) {
  MomentEstimate e;
  e.n_inner = samples.size();
  if (samples.empty()) return e;
  const double n = static_cast<double>(samples.size());
  e.value = pairwise_sum(samples) / n;
  if (samples.size() > 1) {
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double d = samples[i] - e.value;
      sq[i] = d * d;
    }
    e.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  return e;
}

const char* proxy_name(EssSupProxy proxy) noexcept {
  return proxy == EssSupProxy::max ? "max" : "quantile";
}

namespace {

std::size_t fine_steps(double s, double t, double dt) {
  const double ratio = (t - s) / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::fabs(ratio - rounded) > 1e-9 * rounded)
    throw ValidationError("window length must be a positive multiple of the fine step");
  return static_cast<std::size_t>(rounded);
}

}  // namespace

ConditionalMoment markov_conditional_moment(const PathFunctional& functional, double s, double t,
                                            std::span<const double> x_law,
                                            const ConditionalMomentOptions& options,
                                            std::uint64_t seed) {
  if (!(s >= 0.0) || !(s < t)) throw ValidationError("conditional moment: need 0 <= s < t");
  if (x_law.empty()) throw ValidationError("conditional moment: no outer samples");
  if (options.n_inner < 1) throw ValidationError("conditional moment: n_inner must be >= 1");
  if (options.order != 1 && options.order != 2)
    throw ValidationError("conditional moment: order must be 1 or 2");
  if (!(options.delta > 0.0 && options.delta < 1.0))
    throw ValidationError("conditional moment: delta must lie in (0, 1)");
  if (!(options.dt > 0.0)) throw ValidationError("conditional moment: dt must be positive");
  const std::size_t m = fine_steps(s, t, options.dt);
  const double sqrt_dt = std::sqrt(options.dt);
  const std::size_t n_outer = x_law.size();
  const std::size_t n_inner = options.n_inner;

  std::vector<double> samples(n_outer * n_inner);
  parallel_for(samples.size(), options.jobs, [&](std::size_t idx) {
    thread_local std::vector<double> path, scratch;
    path.resize(m);
    scratch.resize(m);
    const std::size_t i = idx / n_inner;
    const std::size_t j = idx % n_inner;
    NormalStream normals(derive_seed(seed, i, j));
    path[0] = x_law[i];
    for (std::size_t k = 1; k < m; ++k) path[k] = path[k - 1] + sqrt_dt * normals.next();
    const double v = std::fabs(evaluate(functional, s, options.dt, path, scratch));
    samples[idx] = options.order == 1 ? v : v * v;
  });

  ConditionalMoment out;
  out.proxy = options.proxy;
  out.per_outer.reserve(n_outer);
  for (std::size_t i = 0; i < n_outer; ++i) {
    auto e = mean_estimate(std::span<const double>(samples).subspan(i * n_inner, n_inner));
    e.n_outer = 1;
    out.per_outer.push_back(e);
  }
  std::vector<std::size_t> order(n_outer);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.per_outer[a].value < out.per_outer[b].value;
  });
  std::size_t pick = order.back();
  if (options.proxy == EssSupProxy::quantile) {
    const double rank = std::ceil((1.0 - options.delta) * static_cast<double>(n_outer));
    const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(rank), 1, n_outer) - 1;
    pick = order[k];
  }
  out.selected_outer = pick;
  out.estimate = out.per_outer[pick];
  out.estimate.n_outer = n_outer;
  out.estimate.n_inner = n_inner;
  return out;
}

RhoGridEstimate empirical_rho_grid(const PathFunctional& functional, std::span<const double> grid,
                                   std::size_t n_outer, const RhoGridOptions& options,
                                   std::uint64_t seed) {
  if (grid.size() < 2) throw ValidationError("rho grid: need at least two grid points");
  if (n_outer < 1) throw ValidationError("rho grid: n_outer must be >= 1");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0)) throw ValidationError("rho grid: grid points must be non-negative");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw ValidationError("rho grid: grid must be strictly increasing");
  }
  std::vector<double> z(n_outer);
  for (std::size_t i = 0; i < n_outer; ++i) z[i] = NormalStream(derive_seed(seed, 0, i)).next();

  const std::size_t g = grid.size();
  RhoGridEstimate out{std::vector<double>(grid.begin(), grid.end()), filtration::GridMatrix(g),
                      filtration::GridMatrix(g), {}};
  for (std::size_t a = 0; a < g; ++a) {
    const double s = grid[a];
    std::vector<double> states;
    if (s == 0.0) {
      states.push_back(options.x0);
    } else {
      states.resize(n_outer);
      for (std::size_t i = 0; i < n_outer; ++i) states[i] = options.x0 + std::sqrt(s) * z[i];
    }
    for (std::size_t b = a + 1; b < g; ++b) {
      const auto cm =
          markov_conditional_moment(functional, s, grid[b], states, options.inner, seed + 1);
      out.value(a, b) = cm.estimate.value;
      out.std_error(a, b) = cm.estimate.std_error;
    }
  }
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = a + 1; b < g; ++b)
      for (std::size_t c = a; c < b; ++c)
        for (std::size_t d = c + 1; d <= b; ++d) {
          if (c == a && d == b) continue;
          const double se = std::hypot(out.std_error(a, b), out.std_error(c, d));
          const double excess = out.value(c, d) - out.value(a, b);
          if (excess > options.flag_sigmas * se)
            out.monotone_flags.push_back({a, b, c, d, se > 0.0 ? excess / se : INFINITY});
        }
  return out;
}

ExpMoment exp_moment(std::span<const double> samples, double lambda, double truncation) {
  if (samples.empty()) throw ValidationError("exp_moment: empty sample");
  if (!(lambda > 0.0)) throw ValidationError("exp_moment: lambda must be positive");
  if (!(truncation > 0.0)) throw ValidationError("exp_moment: truncation must be positive");
  std::vector<double> terms(samples.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double e = std::exp(lambda * samples[i]);
    if (e >= truncation) {
      ++hits;
      terms[i] = truncation;
    } else {
      terms[i] = e;
    }
  }
  ExpMoment out;
  out.estimate = mean_estimate(terms);
  out.truncation_hit_rate = static_cast<double>(hits) / static_cast<double>(samples.size());
  return out;
}

}  // namespace bmo::mc

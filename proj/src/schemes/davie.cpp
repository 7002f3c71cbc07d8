#include "bmo/schemes/davie.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "bmo/analysis/gamma.hpp"
#include "bmo/error.hpp"
#include "bmo/parallel.hpp"
#include "bmo/simd/kernels.hpp"

namespace bmo::schemes {

namespace {

void require_unit_horizon(const mc::PathEnsemble& ensemble) {
  const auto& shape = ensemble.shape();
  if (shape.dim != 1) throw ValidationError("davie: one-dimensional ensemble required");
  if (std::fabs(shape.horizon - 1.0) > 1e-12) throw ValidationError("davie: horizon must be 1");
}

}  // namespace

std::vector<DavieSamples> davie_functional(const mc::Integrand& g, std::span<const double> xs,
                                           const mc::PathEnsemble& ensemble, bool test_mode,
                                           unsigned jobs) {
  require_unit_horizon(ensemble);
  const auto& shape = ensemble.shape();
  const std::size_t m = shape.n_steps;
  const double dt = shape.dt();
  const std::size_t n_paths = shape.n_paths;
  const bool use_kernel = g.kind() == mc::Integrand::Kind::sign;

  std::vector<DavieSamples> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out[i].x = xs[i];
    out[i].samples.resize(n_paths);
  }
  std::vector<std::size_t> clips(n_paths * xs.size(), 0);

  auto eval = [&](double t, double y, std::size_t& clipped) {
    const double v = g(t, y);
    if (test_mode || (v >= -1.0 && v <= 1.0)) return v;
    ++clipped;
    return std::clamp(v, -1.0, 1.0);
  };

  parallel_for(n_paths, jobs, [&](std::size_t p) {
    thread_local std::vector<double> inc, b;
    inc.resize(m);
    b.resize(m);
    ensemble.fill_increments(p, inc);
    b[0] = 0.0;
    for (std::size_t k = 1; k < m; ++k) b[k] = b[k - 1] + inc[k - 1];
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (use_kernel) {
        out[i].samples[p] = simd::kernels().sign_shift_diff_sum(b.data(), m, xs[i]) * dt;
        continue;
      }
      std::size_t clipped = 0;
      double sum = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double t = static_cast<double>(k) * dt;
        sum = sum + (eval(t, b[k] + xs[i], clipped) - eval(t, b[k], clipped));
      }
      out[i].samples[p] = sum * dt;
      clips[i * n_paths + p] = clipped;
    }
  });
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t p = 0; p < n_paths; ++p) out[i].clipped += clips[i * n_paths + p];
  return out;
}

DavieSamples davie_functional(const mc::Integrand& g, double x, const mc::PathEnsemble& ensemble,
                              bool test_mode, unsigned jobs) {
  const double xs[1] = {x};
  return std::move(davie_functional(g, xs, ensemble, test_mode, jobs).front());
}

DavieMoments davie_moments(const DavieSamples& d) {
  std::vector<double> p2(d.samples.size()), p4(d.samples.size());
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    p2[i] = d.samples[i] * d.samples[i];
    p4[i] = p2[i] * p2[i];
  }
  DavieMoments out;
  out.x = d.x;
  out.m2 = mc::mean_estimate(p2);
  out.m4 = mc::mean_estimate(p4);
  const double g2 = analysis::gamma_lanczos(2.0);
  const double g3 = analysis::gamma_lanczos(3.0);
  const double base = out.m2.value / g2;
  out.gamma_ratio = base > 0.0 ? out.m4.value / (g3 * base * base) : 0.0;
  return out;
}

}  // namespace bmo::schemes

#pragma once

#include <optional>

#include "bmo/filtration/oscillation.hpp"

namespace bmo::analysis {

using filtration::GridMatrix;

/// w(s, t): the largest sum of rho^p over partitions of [s, t] into grid
/// intervals. Superadditive and w >= rho^p on every interval; w(s, s) = 0.
struct OscillationControl {
  GridMatrix w;
  double p = 1.0;
  std::optional<double> vmo_alpha_seminorm;
};

/// Interval dynamic programme:
/// w[s][t] = max(rho[s][t]^p, max_{s<u<t} w[s][u] + w[u][t]).
OscillationControl pvar_control(const GridMatrix& rho, double p);

/// max over grid pairs s < t of rho[s][t] / ((t - s) dt)^alpha.
double vmo_alpha_seminorm(const GridMatrix& rho, double alpha, double dt);

}  // namespace bmo::analysis

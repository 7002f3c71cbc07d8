#pragma once
// Order-fixed reductions. Results depend only on the input sequence, never on
// how the caller scheduled the work that produced it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace bmo {

/// Recursive pairwise summation; blocks of 8 or fewer are summed left to right.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

/// log(sum_i exp(x_i)) with the max shifted out; the shifted terms are
/// summed pairwise. Returns -inf for an empty input.
inline double log_sum_exp(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  std::vector<double> shifted(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = std::exp(x[i] - m);
  return m + std::log(pairwise_sum(shifted));
}

}  // namespace bmo

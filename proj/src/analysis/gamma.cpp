#include "bmo/analysis/gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "bmo/error.hpp"

namespace bmo::analysis {

namespace {

constexpr double kG = 7.0;
constexpr std::array<double, 9> kCoeff{
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Series part A(z) for z = x - 1.
double series(double z) {
  double a = kCoeff[0];
  for (std::size_t i = 1; i < kCoeff.size(); ++i) a += kCoeff[i] / (z + static_cast<double>(i));
  return a;
}

}  // namespace

double gamma_lanczos(double x) {
  if (x < 0.5) {
    if (x == std::floor(x)) throw ValidationError("gamma: pole at non-positive integer");
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_lanczos(1.0 - x));
  }
  const double z = x - 1.0;
  const double t = z + kG + 0.5;
  // t^(z + 1/2) split in two halves to delay overflow.
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * series(z);
}

double log_gamma_lanczos(double x) {
  if (!(x > 0.0)) throw ValidationError("log_gamma: argument must be positive");
  if (x < 0.5) return std::log(std::fabs(gamma_lanczos(x)));
  const double z = x - 1.0;
  const double t = z + kG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(series(z));
}

}  // namespace bmo::analysis

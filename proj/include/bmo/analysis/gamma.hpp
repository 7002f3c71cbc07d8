#pragma once

namespace bmo::analysis {

/// Gamma function by the Lanczos approximation (g = 7, nine terms), with the
/// reflection formula below 1/2. Relative error below 1e-13 on [1, 50].
double gamma_lanczos(double x);

/// log Gamma(x) for x > 0, same approximation.
double log_gamma_lanczos(double x);

}  // namespace bmo::analysis

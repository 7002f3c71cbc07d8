#include "bmo/schemes/sde.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "bmo/error.hpp"

namespace bmo::schemes {

void SdeModel::validate() const {
  if (dim < 1) throw ValidationError("sde: dimension must be >= 1");
  if (x0.size() != dim) throw ValidationError("sde: x0 must have one entry per dimension");
  if (!drift || !diffusion) throw ValidationError("sde: drift and diffusion are required");
}

SdeModel SdeModel::scalar(std::string id, std::function<double(double, double)> b,
                          std::function<double(double, double)> sigma, double x0) {
  SdeModel m;
  m.id = std::move(id);
  m.dim = 1;
  m.x0 = {x0};
  m.drift = [b = std::move(b)](double t, std::span<const double> x, std::span<double> out) {
    out[0] = b(t, x[0]);
  };
  m.diffusion = [s = std::move(sigma)](double t, std::span<const double> x,
                                       std::span<double> out) { out[0] = s(t, x[0]); };
  return m;
}

SdeModel SdeModel::named(const std::string& drift, double sigma, double x0, double c) {
  std::function<double(double, double)> b;
  if (drift == "zero") {
    b = [](double, double) { return 0.0; };
  } else if (drift == "sign") {
    b = [](double, double x) { return static_cast<double>(x > 0.0) - static_cast<double>(x < 0.0); };
  } else if (drift == "linear") {
    b = [](double, double x) { return -x; };
  } else if (drift == "constant") {
    b = [c](double, double) { return c; };
  } else {
    throw ValidationError("unknown drift '" + drift + "' (expected zero, sign, linear or constant)");
  }
  return scalar(drift, std::move(b), [sigma](double, double) { return sigma; }, x0);
}

EllipticityReport check_ellipticity(const SdeModel& model, double k1, std::size_t n_samples,
                                    double radius, double horizon, std::uint64_t seed) {
  model.validate();
  if (!(k1 >= 1.0)) throw ValidationError("ellipticity: K1 must be >= 1");
  if (n_samples < 1) throw ValidationError("ellipticity: need at least one sample");
  const std::size_t d = model.dim;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> space(-radius, radius), time(0.0, horizon);
  std::vector<double> x(d), sig(d * d);
  EllipticityReport rep;
  rep.k1 = k1;
  rep.n_samples = n_samples;
  rep.min_eigenvalue = INFINITY;
  rep.max_eigenvalue = -INFINITY;
  for (std::size_t i = 0; i < n_samples; ++i) {
    for (auto& v : x) v = space(rng);
    model.diffusion(time(rng), x, sig);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        s(sig.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const Eigen::MatrixXd a = s * s.transpose();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, eig.eigenvalues().minCoeff());
    rep.max_eigenvalue = std::max(rep.max_eigenvalue, eig.eigenvalues().maxCoeff());
  }
  rep.holds = rep.min_eigenvalue >= 1.0 / k1 && rep.max_eigenvalue <= k1;
  return rep;
}

}  // namespace bmo::schemes

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/random/sobol.hpp>

#include "translab/common.hpp"

namespace translab {

using Rng = std::mt19937_64;

/// Uniform unit vectors from a scrambled-free Sobol stream (Gaussian via inverse erf, then normalized).
class SobolSphere {
 public:
  explicit SobolSphere(Eigen::Index dim) : dim_(dim), engine_(static_cast<unsigned>(dim)) {
    engine_.discard(static_cast<std::uintmax_t>(dim));  // skip the all-zero first point
  }

  Vector next() {
    Vector g(dim_);
    for (Eigen::Index k = 0; k < dim_; ++k) {
      const double u = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
      g[k] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
    }
    const double n = g.norm();
    if (n == 0.0) return next();
    return g / n;
  }

 private:
  Eigen::Index dim_;
  boost::random::sobol engine_;
};

/// Quasi-random points of the unit square (2-D Sobol), for lune and box sampling.
class SobolPlane {
 public:
  SobolPlane() : engine_(2) { engine_.discard(2); }
  std::pair<double, double> next() {
    const double a = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    const double b = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    return {a, b};
  }

 private:
  boost::random::sobol engine_;
};

inline Vector random_unit_vector(Rng& rng, Eigen::Index dim) {
  std::normal_distribution<double> gauss;
  Vector v(dim);
  do {
    for (Eigen::Index k = 0; k < dim; ++k) v[k] = gauss(rng);
  } while (v.norm() < 1e-12);
  return v.normalized();
}

/// Haar-random rotation (QR of a Gaussian matrix with sign correction).
inline Matrix random_rotation(Rng& rng, Eigen::Index dim) {
  std::normal_distribution<double> gauss;
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

}  // namespace translab

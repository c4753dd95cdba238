#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "gmcf/types.hpp"

namespace testing {

/// Seeded sampler for property tests.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  /// Point of the disk of radius r whose distance to the boundary lies in
  /// [dmin, dmax].
  gmcf::Vecd disk_point(double r, double dmin, double dmax) {
    const double d = uniform(dmin, dmax);
    const double th = uniform(0.0, 2.0 * M_PI);
    gmcf::Vecd x(2);
    x << (r - d) * std::cos(th), (r - d) * std::sin(th);
    return x;
  }

  gmcf::Vecd unit_vector(int dim) {
    gmcf::Vecd w(dim);
    do {
      for (int i = 0; i < dim; ++i) w(i) = std::normal_distribution<double>()(rng_);
    } while (w.norm() < 1e-8);
    return w / w.norm();
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace testing

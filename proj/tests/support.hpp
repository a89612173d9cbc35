#ifndef DCH_TESTS_SUPPORT_HPP
#define DCH_TESTS_SUPPORT_HPP

#include <cmath>
#include <numbers>
#include <random>

#include "dch/core.hpp"

namespace dch::test {

// Random trigonometric polynomial with modes 1..max_mode, unit-scale amplitudes
// decaying like 1/j so derivatives stay moderate.
inline Field random_band_limited(const Grid& g, std::mt19937_64& rng, std::size_t max_mode = 24,
                                 double offset = 0.0) {
  std::normal_distribution<double> normal;
  std::vector<double> a(max_mode + 1), b(max_mode + 1);
  for (std::size_t j = 1; j <= max_mode; ++j) {
    a[j] = normal(rng) / static_cast<double>(j);
    b[j] = normal(rng) / static_cast<double>(j);
  }
  return sample(g, [&](double x) {
    double s = offset;
    for (std::size_t j = 1; j <= max_mode; ++j) {
      const double k = std::numbers::pi * static_cast<double>(j) / g.half_width;
      s += a[j] * std::cos(k * x) + b[j] * std::sin(k * x);
    }
    return s;
  });
}

// Random smooth bump that decays well inside the box: a sum of a few Gaussians.
inline Field random_bump(const Grid& g, std::mt19937_64& rng, double spread = 4.0) {
  std::uniform_real_distribution<double> pos(-spread, spread), amp(-1.0, 1.0), wid(0.8, 2.0);
  double c[4], a[4], w[4];
  for (int i = 0; i < 4; ++i) {
    c[i] = pos(rng);
    a[i] = amp(rng);
    w[i] = wid(rng);
  }
  return sample(g, [&](double x) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += a[i] * std::exp(-(x - c[i]) * (x - c[i]) / (w[i] * w[i]));
    return s;
  });
}

inline double relative_sup(const Field& a, const Field& b) {
  const double scale = std::max(a.max_abs(), b.max_abs());
  return scale > 0.0 ? sup_distance(a, b) / scale : 0.0;
}

}  // namespace dch::test

#endif

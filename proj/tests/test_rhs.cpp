#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dch/analysis.hpp"
#include "dch/helmholtz.hpp"
#include "dch/rhs.hpp"
#include "dch/spectral.hpp"
#include "support.hpp"

using namespace dch;

namespace {

Field gaussian(const Grid& g) {
  return sample(g, [](double x) { return std::exp(-x * x); });
}

Field pointwise(const Field& a, const Field& b) {
  Field out(a.grid());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

}  // namespace

TEST_CASE("nonlocal flux") {
  const Grid g = build_grid(30.0, 2048);
  RhsWorkspace ws(2.0, g, true);
  CHECK(nonlocal_flux(Field(g), ws).max_abs() == 0.0);
  CHECK(sup_distance(nonlocal_flux(Field(g, 0.5), ws), Field(g, 2.0 * 0.25)) < 1e-14);

  const Field density = sample(g, [](double x) {
    const double e = std::exp(-x * x);
    return 2 * e * e + 2 * (2 * x * e) * (2 * x * e);
  });
  CHECK(sup_distance(nonlocal_flux(gaussian(g), ws), kernel_convolve_direct(density, 2.0)) < 1e-6);
}

TEST_CASE("velocity form") {
  const Grid g = build_grid(20.0, 1024);
  for (bool dealias : {true, false}) {
    RhsWorkspace ws(2.0, g, dealias);
    CHECK(rhs_v(Field(g), ws).max_abs() == 0.0);
    CHECK(rhs_v(Field(g, 1.3), ws).max_abs() < 1e-13);

    // even data gives an odd rate; x_j and x_{N-j} are mirror nodes
    const Field r = rhs_v(gaussian(g), ws);
    double worst = 0.0;
    for (std::size_t j = 1; j < g.n_points; ++j) worst = std::max(worst, std::abs(r[j] + r[g.n_points - j]));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("momentum form matches the velocity form") {
  const Grid g = build_grid(20.0, 1024);
  RhsWorkspace ws(2.0, g, true);
  CHECK(rhs_n(Field(g), ws).max_abs() == 0.0);
  CHECK(rhs_n(Field(g, -0.7), ws).max_abs() < 1e-13);

  const Field v = gaussian(g);
  const HelmholtzOperator& op = ws.helmholtz();
  const Field lhs = op.apply(rhs_v(v, ws));
  const Field rhs = rhs_n(op.apply(v), ws);
  CHECK(sup_distance(lhs, rhs) < 1e-8);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const Field w = test::random_bump(g, rng);
    CHECK(test::relative_sup(op.apply(rhs_v(w, ws)), rhs_n(op.apply(w), ws)) < 1e-8);
  }
}

TEST_CASE("slope equation") {
  const Grid g = build_grid(20.0, 1024);
  const double d = 2.0;
  RhsWorkspace ws(d, g, true);
  CHECK(rhs_vx(Field(g), ws).max_abs() == 0.0);
  CHECK(rhs_vx(Field(g, 0.8), ws).max_abs() < 1e-13);

  const Field v = gaussian(g);
  const Field vxx = spectral_derivative(v, 2);
  const Field lhs = spectral_derivative(rhs_v(v, ws), 1) + d * pointwise(v, vxx);
  CHECK(sup_distance(lhs, rhs_vx(v, ws)) < 1e-8);
}

TEST_CASE("shift equivariance") {
  const Grid g = build_grid(10.0, 256);
  std::mt19937_64 rng(9);
  RhsWorkspace ws(3.0, g, true);
  const Field v = test::random_band_limited(g, rng, 20);
  Field shifted(g);
  for (std::size_t j = 0; j < g.n_points; ++j) shifted[(j + 1) % g.n_points] = v[j];
  const Field a = rhs_v(v, ws);
  const Field b = rhs_v(shifted, ws);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.n_points; ++j) worst = std::max(worst, std::abs(b[(j + 1) % g.n_points] - a[j]));
  CHECK(worst <= 1e-12 * a.max_abs());
}

TEST_CASE("scaling onto the classical equation") {
  std::mt19937_64 rng(21);
  for (double d : {2.0, 4.0, 9.0}) {
    CAPTURE(d);
    const Grid g = build_grid(30.0 * std::sqrt(d), 2048);
    const Field v = test::random_bump(g, rng);
    RhsWorkspace ws_d(d, g, true);
    const Field u = scale_to_unit(v, d);
    RhsWorkspace ws_1(1.0, u.grid(), true);
    const Field lhs = scale_to_unit(rhs_v(v, ws_d), d);
    const Field rhs = rhs_v(u, ws_1);
    CHECK(sup_distance(lhs, rhs) < 1e-6);
  }
}

TEST_CASE("workspace exposes stage data") {
  const Grid g = build_grid(20.0, 512);
  RhsWorkspace ws(1.0, g, false);
  const Field v = gaussian(g);
  rhs_v(v, ws);
  CHECK(sup_distance(ws.vx(), spectral_derivative(v, 1)) < 1e-12);
  CHECK(sup_distance(ws.flux(), nonlocal_flux(v, ws)) < 1e-15);
  Field bad = v;
  bad[1] = NAN;
  CHECK_THROWS_AS(rhs_v(bad, ws), NumericalError);
}

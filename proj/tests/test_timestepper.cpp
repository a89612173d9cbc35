#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dch/analysis.hpp"
#include "dch/timestepper.hpp"

using namespace dch;

namespace {

SimParams params_for(const Grid& g, double d, double t_end) {
  SimParams p;
  p.d = d;
  p.grid = g;
  p.t_end = t_end;
  return p;
}

struct BlowupRun {
  RunOutcome outcome;
  double bound = 0.0;
  StepControl ctrl;
};

BlowupRun blowup_run(double d, std::size_t n_points) {
  const Grid g = build_grid(40.0, n_points);
  const Field v0 = sample_initial_data({Profile::neg_x_gaussian, 1.0, 0.0, 1.0}, g, d);
  const SimParams p = params_for(g, d, 10.0);
  BlowupRun r;
  r.ctrl = StepControl::from_params(p, v0);
  r.bound = blowup_time_upper_bound(v0, d, 0.0);
  SimState s(v0, d);
  ParticleSet markers = seed_particles(s.n(), s.vx(), 64, 0.0);
  r.outcome = integrate(s, p, r.ctrl, &markers);
  return r;
}

}  // namespace

TEST_CASE("step size choice") {
  StepControl c;
  c.cfl = 0.5;
  c.dt_min = 1e-6;
  c.dt_max = 0.05;
  SUBCASE("at rest") {
    const SimState s(Field(build_grid(10.0, 64)), 1.0);
    CHECK(choose_dt(s, c, 10.0) == 0.05);
  }
  SUBCASE("transport limited") {
    const Grid g = build_grid(5.12, 1024);  // h = 0.01
    const SimState s(sample(g, [&](double x) { return std::cos(std::numbers::pi * x / g.half_width); }), 4.0);
    REQUIRE(s.vx().min() >= -1.0);
    CHECK(choose_dt(s, c, 10.0) == doctest::Approx(0.00125).epsilon(1e-10));
    CHECK(choose_dt(s, c, 0.001) == doctest::Approx(0.001).epsilon(1e-12));
  }
  SUBCASE("slope limited") {
    const SimState s(Field(build_grid(10.0, 64)), 1.0);
    const double a = choose_dt(s, c, 10.0, -1e3);
    CHECK(a <= 1e-3 * c.cfl);
    CHECK(choose_dt(s, c, 10.0, -2e3) == doctest::Approx(a / 2));
    CHECK(choose_dt(s, c, 10.0, -1e9) == c.dt_min);
  }
}

TEST_CASE("step control defaults") {
  const Grid g = build_grid(20.0, 256);
  const Field v0 = sample_initial_data({Profile::neg_x_gaussian, 2.0, 0.0, 1.0}, g, 1.0);
  SimParams p = params_for(g, 1.0, 1.0);
  const StepControl c = StepControl::from_params(p, v0);
  CHECK(c.breaking_slope_threshold == doctest::Approx(-1e3 * 3.0).epsilon(1e-6));
  CHECK(c.dt_min == doctest::Approx(p.cfl / 3e3).epsilon(1e-6));
  p.dt_min = 1e-3;
  p.breaking_slope_threshold = -50.0;
  const StepControl fixed = StepControl::from_params(p, v0);
  CHECK(fixed.dt_min == 1e-3);
  CHECK(fixed.breaking_slope_threshold == -50.0);
  StepControl bad;
  bad.dt_min = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("constant state is a fixed point") {
  const Grid g = build_grid(10.0, 128);
  SimState s(Field(g, 0.4), 2.0);
  RhsWorkspace ws(2.0, g, true);
  step_rk4(s, 0.01, ws);
  CHECK(sup_distance(s.v(), Field(g, 0.4)) < 1e-15);
  CHECK(s.t == 0.01);
  CHECK(s.step_count == 1);
  REQUIRE(s.min_vx_history.size() == 1);
  CHECK(s.min_vx_history[0].t == 0.01);
  CHECK_THROWS_AS(step_rk4(s, 0.0, ws), Error);
}

TEST_CASE("classical RK4 on the linear test equation") {
  for (double z : {0.1, 0.5, 1.3, 2.7}) {
    const double lambda = 2.0, dt = z / lambda;
    double y[1] = {1.0};
    rk4_update(std::span<double>(y), dt, [&](std::span<const double> u, std::span<double> du) { du[0] = -lambda * u[0]; });
    const double want = 1 - z + z * z / 2 - z * z * z / 6 + z * z * z * z / 24;
    CHECK(y[0] == doctest::Approx(want).epsilon(1e-15));
  }
}

TEST_CASE("fourth-order convergence in time") {
  const Grid g = build_grid(32.0, 512);
  const double d = 1.0;
  const Field v0 = sample_initial_data({Profile::momentum_gaussian, 0.5, 0.0, 2.0}, g, d);
  RhsWorkspace ws(d, g, true);
  auto run = [&](double dt) {
    SimState s(v0, d);
    const int steps = static_cast<int>(std::lround(2.0 / dt));
    for (int i = 0; i < steps; ++i) step_rk4(s, dt, ws);
    return s.v();
  };
  const double dt = 0.1;
  const Field ref = run(dt / 8);
  const double e1 = sup_distance(run(dt), ref);
  const double e2 = sup_distance(run(dt / 2), ref);
  MESSAGE("errors " << e1 << " " << e2 << " ratio " << e1 / e2);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("zero end time") {
  const Grid g = build_grid(20.0, 256);
  SimState s(sample_initial_data({Profile::gaussian, 1.0, 0.0, 1.0}, g, 1.0), 1.0);
  const SimParams p = params_for(g, 1.0, 0.0);
  int calls = 0;
  const Observer obs[] = {[&](const SimState&, const ParticleSet*) { ++calls; }};
  const RunOutcome o = integrate(s, p, StepControl::from_params(p, s.v()), nullptr, obs);
  REQUIRE(std::holds_alternative<Completed>(o));
  CHECK(std::get<Completed>(o).t_end == 0.0);
  CHECK(calls == 1);
  CHECK(s.step_count == 0);
}

TEST_CASE("non-finite initial state") {
  const Grid g = build_grid(20.0, 64);
  Field v(g);
  v[3] = NAN;
  SimState s(v, 1.0);
  SimParams p = params_for(g, 1.0, 1.0);
  const RunOutcome o = integrate(s, p, StepControl{});
  CHECK(std::holds_alternative<NumericalFailure>(o));
  CHECK(outcome_name(o) == "NumericalFailure");
}

TEST_CASE("observer cadence lands on output times") {
  const Grid g = build_grid(32.0, 512);
  SimState s(sample_initial_data({Profile::momentum_gaussian, 0.3, 0.0, 2.0}, g, 1.0), 1.0);
  const SimParams p = params_for(g, 1.0, 1.0);
  std::vector<double> times;
  const Observer obs[] = {[&](const SimState& st, const ParticleSet*) { times.push_back(st.t); }};
  integrate(s, p, StepControl::from_params(p, s.v()), nullptr, obs, ObserverCadence{0, 0.25});
  const std::vector<double> want{0.0, 0.25, 0.5, 0.75, 1.0};
  CHECK(times == want);
  for (std::size_t i = 1; i < s.min_vx_history.size(); ++i) {
    CHECK(s.min_vx_history[i].t > s.min_vx_history[i - 1].t);
  }
}

TEST_CASE("smooth global run completes and conserves energy") {
  const Grid g = build_grid(55.0, 2048);
  const double d = 2.0;
  const Field v0 = sample_initial_data({Profile::momentum_gaussian, 0.1, 0.0, 3.0}, g, d);
  SimState s(v0, d);
  const SimParams p = params_for(g, d, 20.0);
  const double e0 = energy(v0, d);
  double drift = 0.0;
  const Observer obs[] = {[&](const SimState& st, const ParticleSet*) {
    drift = std::max(drift, std::abs(energy(st.v(), d) - e0) / e0);
  }};
  const RunOutcome o = integrate(s, p, StepControl::from_params(p, v0), nullptr, obs, ObserverCadence{0, 1.0});
  CHECK(std::holds_alternative<Completed>(o));
  CHECK(drift < 1e-8);
}

TEST_CASE("slope-criterion data breaks before the bound") {
  const BlowupRun r = blowup_run(1.0, 2048);
  REQUIRE(std::holds_alternative<WaveBreaking>(r.outcome));
  const WaveBreaking& wb = std::get<WaveBreaking>(r.outcome);
  MESSAGE("t_detect " << wb.t_detect << " bound " << r.bound);
  CHECK(wb.t_detect <= r.bound);
  CHECK(wb.min_vx <= r.ctrl.breaking_slope_threshold);
  CHECK(wb.last_dt <= r.ctrl.dt_min * (1 + 1e-9));
  REQUIRE(wb.certificate.size() >= 10);
  for (std::size_t i = wb.certificate.size() - 9; i < wb.certificate.size(); ++i) {
    CHECK(wb.certificate[i].min_vx <= wb.certificate[i - 1].min_vx);
  }

  SUBCASE("detection time is stable under refinement") {
    const BlowupRun fine = blowup_run(1.0, 4096);
    REQUIRE(std::holds_alternative<WaveBreaking>(fine.outcome));
    const double t2 = std::get<WaveBreaking>(fine.outcome).t_detect;
    CHECK(std::abs(t2 - wb.t_detect) / wb.t_detect < 0.05);
  }
  SUBCASE("deterministic") {
    const BlowupRun again = blowup_run(1.0, 2048);
    const WaveBreaking& w2 = std::get<WaveBreaking>(again.outcome);
    CHECK(w2.t_detect == wb.t_detect);
    CHECK(w2.min_vx == wb.min_vx);
    CHECK(w2.certificate.size() == wb.certificate.size());
  }
}

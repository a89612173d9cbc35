#include "dch/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dch/kernels.hpp"
#include "dch/spectral.hpp"

namespace dch {

void StepControl::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw Error("cfl must lie in (0, 1]");
  if (!(dt_min > 0.0 && dt_min < dt_max)) throw Error("need 0 < dt_min < dt_max");
  if (!(breaking_slope_threshold < 0.0)) throw Error("breaking slope threshold must be negative");
}

StepControl StepControl::from_params(const SimParams& params, const Field& v0) {
  StepControl ctrl;
  ctrl.cfl = params.cfl;
  ctrl.dt_max = params.dt_max;
  if (params.breaking_slope_threshold) {
    ctrl.breaking_slope_threshold = *params.breaking_slope_threshold;
  } else {
    const double steepest = std::min(0.0, spectral_derivative(v0, 1).min());
    ctrl.breaking_slope_threshold = -1e3 * (1.0 + std::abs(steepest));
  }
  ctrl.dt_min = params.dt_min.value_or(params.cfl / std::abs(ctrl.breaking_slope_threshold));
  ctrl.validate();
  return ctrl;
}

std::string outcome_name(const RunOutcome& outcome) {
  switch (outcome.index()) {
    case 0:
      return "Completed";
    case 1:
      return "WaveBreaking";
    default:
      return "NumericalFailure";
  }
}

SteepestSlope steepest_slope(const SimState& state, const ParticleSet* particles) {
  const Field& vx = state.vx();
  const std::size_t j = vx.argmin();
  SteepestSlope out{vx[j], state.grid().node(j)};
  if (particles) {
    for (std::size_t i = 0; i < particles->size(); ++i) {
      if (particles->slope[i] < out.value) out = {particles->slope[i], particles->positions[i]};
    }
  }
  return out;
}

namespace {

double raw_dt(const SimState& state, const StepControl& ctrl, double min_slope) {
  constexpr double kTiny = 1e-12;
  const double transport = state.grid().spacing / (state.d() * state.v().max_abs() + kTiny);
  const double steepening =
      min_slope < 0.0 ? 1.0 / std::abs(min_slope) : std::numeric_limits<double>::infinity();
  return std::clamp(ctrl.cfl * std::min(transport, steepening), ctrl.dt_min, ctrl.dt_max);
}

}  // namespace

double choose_dt(const SimState& state, const StepControl& ctrl, double t_end, double min_slope) {
  const double dt = raw_dt(state, ctrl, min_slope);
  const double remaining = t_end - state.t;
  return remaining > 0.0 ? std::min(dt, remaining) : dt;
}

double choose_dt(const SimState& state, const StepControl& ctrl, double t_end) {
  return choose_dt(state, ctrl, t_end, state.vx().min());
}

void step_rk4(SimState& state, double dt, RhsWorkspace& ws, ParticleSet* particles) {
  if (!(dt > 0.0)) throw Error("time step must be positive");
  static constexpr double kOffset[4] = {0.0, 0.5, 0.5, 1.0};
  static constexpr double kWeight[4] = {1.0, 2.0, 2.0, 1.0};

  const Grid& grid = state.grid();
  const Field& v0 = state.v();
  std::array<Field, 4> k{Field(grid), Field(grid), Field(grid), Field(grid)};
  std::array<StageSnapshot, 4> stages;
  Field stage(grid);
  Field next = v0;

  for (std::size_t s = 0; s < 4; ++s) {
    if (s == 0) {
      stage = v0;
    } else {
      kernels::omp::axpy_to(kOffset[s] * dt, k[s - 1].values(), v0.values(), stage.values());
    }
    rhs_v_into(stage, ws, k[s]);
    k[s].require_finite("Runge-Kutta stage");
    if (particles) stages[s] = StageSnapshot{stage, ws.vx(), ws.flux()};
    kernels::omp::axpy(kWeight[s] * dt / 6.0, k[s].values(), next.values());
  }
  next.require_finite("Runge-Kutta update");

  state.set_v(std::move(next));
  state.t += dt;
  state.last_dt = dt;
  ++state.step_count;
  if (particles) *particles = advance_particles(*particles, stages, dt, state.d());
  state.min_vx_history.push_back({state.t, steepest_slope(state, particles).value});
}

RunOutcome integrate(SimState& state, const SimParams& params, const StepControl& ctrl, ParticleSet* particles,
                     std::span<const Observer> observers, ObserverCadence cadence) {
  params.validate();
  ctrl.validate();
  RhsWorkspace ws(params.d, state.grid(), params.dealias);

  std::size_t last_notified = std::numeric_limits<std::size_t>::max();
  auto notify = [&] {
    if (last_notified == state.step_count) return;
    last_notified = state.step_count;
    for (const auto& obs : observers) obs(state, particles);
  };

  if (!state.v().all_finite()) return NumericalFailure{state.t, "initial state is not finite"};
  notify();
  if (state.t >= params.t_end) return Completed{state.t};

  constexpr double kCollapseSlack = 1e-9;
  const double collapse = ctrl.dt_min * (1.0 + kCollapseSlack);
  const double t0 = state.t;
  std::size_t output_index = 1;
  auto next_output = [&] {
    return cadence.every_time > 0.0 ? t0 + static_cast<double>(output_index) * cadence.every_time
                                    : std::numeric_limits<double>::infinity();
  };

  while (true) {
    const SteepestSlope slope = steepest_slope(state, particles);
    const double dt_choice = raw_dt(state, ctrl, slope.value);
    if (state.step_count > 0 && slope.value <= ctrl.breaking_slope_threshold && dt_choice <= collapse &&
        state.last_dt <= collapse) {
      notify();
      WaveBreaking wb;
      wb.t_detect = state.t;
      wb.x_detect = slope.x;
      wb.min_vx = slope.value;
      wb.last_dt = state.last_dt;
      wb.slope_threshold = ctrl.breaking_slope_threshold;
      wb.dt_min = ctrl.dt_min;
      wb.certificate = state.min_vx_history;
      return wb;
    }

    const double target = std::min(params.t_end, next_output());
    // Steps that would stop a hair short of the target are stretched onto it.
    const double remaining = target - state.t;
    const bool lands = dt_choice >= remaining * (1.0 - 1e-9);
    const double dt = lands ? remaining : dt_choice;
    try {
      step_rk4(state, dt, ws, particles);
    } catch (const NumericalError& e) {
      return NumericalFailure{state.t, e.what()};
    }
    if (lands) {
      state.t = target;
      state.min_vx_history.back().t = target;
    }

    bool due = cadence.every_steps > 0 && state.step_count % cadence.every_steps == 0;
    if (lands && target == next_output()) {
      due = true;
      ++output_index;
    }
    if (state.t >= params.t_end) {
      notify();
      return Completed{state.t};
    }
    if (due) notify();
  }
}

}  // namespace dch

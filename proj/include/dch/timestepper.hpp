#ifndef DCH_TIMESTEPPER_HPP
#define DCH_TIMESTEPPER_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dch/core.hpp"
#include "dch/lagrangian.hpp"
#include "dch/rhs.hpp"
#include "dch/state.hpp"

namespace dch {

struct StepControl {
  double cfl = 0.3;
  double dt_min = 1e-4;
  double dt_max = 0.05;
  /// M_break < 0: wave breaking needs min v_x <= M_break together with dt at dt_min.
  double breaking_slope_threshold = -1e3;

  void validate() const;

  /// Resolves the defaults: M_break = -1e3 (1 + |min v0_x|), dt_min = cfl / |M_break|.
  static StepControl from_params(const SimParams& params, const Field& v0);
};

struct Completed {
  double t_end = 0.0;
};

struct WaveBreaking {
  double t_detect = 0.0;
  double x_detect = 0.0;
  double min_vx = 0.0;
  double last_dt = 0.0;
  double slope_threshold = 0.0;
  double dt_min = 0.0;
  std::vector<SlopeSample> certificate;
};

struct NumericalFailure {
  double t = 0.0;
  std::string reason;
};

using RunOutcome = std::variant<Completed, WaveBreaking, NumericalFailure>;

std::string outcome_name(const RunOutcome& outcome);

/// Steepest slope seen by the detector: the grid minimum of v_x or, when markers
/// are present, the most negative slope carried along a characteristic.
struct SteepestSlope {
  double value = 0.0;
  double x = 0.0;
};
SteepestSlope steepest_slope(const SimState& state, const ParticleSet* particles);

/// dt = cfl * min(h / (d max|v| + eps), 1 / |min(slope, 0)|), clamped to
/// [dt_min, dt_max]; never past t_end.
double choose_dt(const SimState& state, const StepControl& ctrl, double t_end, double min_slope);
double choose_dt(const SimState& state, const StepControl& ctrl, double t_end);

/// One classical RK4 step on a flat state vector; f(y, dydt) evaluates the rate.
template <class Rate>
void rk4_update(std::span<double> y, double dt, Rate&& f) {
  const std::size_t n = y.size();
  std::vector<double> y0(y.begin(), y.end()), stage(n), k(n), acc(n, 0.0);
  static constexpr double kOffset[4] = {0.0, 0.5, 0.5, 1.0};
  static constexpr double kWeight[4] = {1.0, 2.0, 2.0, 1.0};
  for (int s = 0; s < 4; ++s) {
    for (std::size_t i = 0; i < n; ++i) stage[i] = s == 0 ? y0[i] : y0[i] + kOffset[s] * dt * k[i];
    f(std::span<const double>(stage), std::span<double>(k));
    for (std::size_t i = 0; i < n; ++i) acc[i] += kWeight[s] * k[i];
  }
  for (std::size_t i = 0; i < n; ++i) y[i] = y0[i] + dt / 6.0 * acc[i];
}

/// Advances v (and the markers, if given) by one RK4 step of size dt.
/// Throws NumericalError if any stage turns non-finite.
void step_rk4(SimState& state, double dt, RhsWorkspace& ws, ParticleSet* particles = nullptr);

/// Read-only view handed to observers between accepted steps.
using Observer = std::function<void(const SimState&, const ParticleSet*)>;

struct ObserverCadence {
  std::size_t every_steps = 0;  // 0: off
  double every_time = 0.0;      // 0: off; steps land exactly on multiples
};

/// Advances to t_end, or until wave breaking is certified, or until the state
/// turns non-finite. Observers see the initial state, every cadence point, and
/// the final state.
RunOutcome integrate(SimState& state, const SimParams& params, const StepControl& ctrl,
                     ParticleSet* particles = nullptr, std::span<const Observer> observers = {},
                     ObserverCadence cadence = {});

}  // namespace dch

#endif

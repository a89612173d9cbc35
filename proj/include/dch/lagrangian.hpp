#ifndef DCH_LAGRANGIAN_HPP
#define DCH_LAGRANGIAN_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "dch/core.hpp"
#include "dch/state.hpp"

namespace dch {

/// Periodic cubic (4-point Lagrange) interpolation of f at x, reduced into [-L, L).
double interp(const Field& f, double x);

/// Markers riding the flow dq/dt = d v(t, q).
///
/// Besides positions and log-Jacobians l = d int v_x(q) dt, every marker carries
/// its own slope V, integrated along the characteristic from
///   dV/dt = -(d/2) V^2 + v^2 - p_d * (v^2 + (d/2) v_x^2).
/// While the field is resolved V equals v_x(q). Near wave breaking the Riccati
/// term makes V run away even after the grid can no longer represent the front.
struct ParticleSet {
  std::vector<double> labels;        // x0
  std::vector<double> positions;     // q(t, x0), not wrapped into the box
  std::vector<double> log_jacobian;  // l, q_x = exp(l)
  std::vector<double> slope;         // V along the characteristic
  std::vector<double> momentum0;     // n0(x0)

  /// Steps after which two neighbouring markers were found out of order.
  std::size_t ordering_violations = 0;

  std::size_t size() const { return labels.size(); }
  /// Index of the marker whose label equals x0 exactly; throws if absent.
  std::size_t index_of_label(double x0) const;
};

/// `count` labels equispaced over the region where |n0| > 1e-6 max|n0|, plus an
/// optional forced label, all sorted.
ParticleSet seed_particles(const Field& n0, const Field& vx0, std::size_t count = 64,
                           std::optional<double> forced_label = std::nullopt);

/// Field data of one Runge-Kutta stage.
struct StageSnapshot {
  Field v;
  Field vx;
  Field flux;  // P = (1 - d d_xx)^{-1}(d v^2 + d^2/2 v_x^2)
};

/// One classical RK4 step for the markers using the field's own stage data,
/// so particles and field share the time grid.
ParticleSet advance_particles(const ParticleSet& p, const std::array<StageSnapshot, 4>& stages, double dt,
                              double d);

/// max_i |n(t, q_i) exp(2 l_i) - n0_i| / (eps + max_j |n0_j|).
double momentum_invariant_residual(const SimState& state, const ParticleSet& p);

/// Largest relative gap between exp(l_i) and the centred difference of q over labels.
double jacobian_consistency(const ParticleSet& p);

enum class SignPattern {
  negative_then_positive,  // n <= 0 left of the frontier, >= 0 right of it
  positive_then_negative,
};

struct SignFrontier {
  double frontier = 0.0;         // q(t, x0)
  double left_violation = 0.0;   // wrong-signed magnitude left of the frontier
  double right_violation = 0.0;  // wrong-signed magnitude right of the frontier
};

SignFrontier sign_frontier(const SimState& state, const ParticleSet& p, double x0_label, SignPattern pattern);

}  // namespace dch

#endif

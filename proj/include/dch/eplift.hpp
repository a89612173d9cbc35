#ifndef DCH_EPLIFT_HPP
#define DCH_EPLIFT_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "dch/core.hpp"
#include "dch/kernels.hpp"

namespace dch {

/// Tensor grid for the lift: `points` nodes per axis at -extent + i * 2 extent / points.
struct EpGridSpec {
  std::size_t points = 32;
  double extent = 1.0;
};

/// Largest tensor grid the lift will allocate, per field component.
inline constexpr std::size_t kMaxLiftPoints = std::size_t{1} << 24;

/// Ridge fields u_i(x) = v(x_1 + ... + x_d), m_i(x) = n(x_1 + ... + x_d) on a tensor grid.
struct LiftedFields {
  int dim = 1;
  double t = 0.0;
  kernels::RidgeGrid grid;
  std::vector<std::vector<double>> u;  // dim components, flat, first axis fastest
  std::vector<std::vector<double>> m;

  /// Multiplies u_component by factor; breaks the ansatz on purpose.
  void scale_velocity(int component, double factor);
};

/// Lifts v at time t into dimension dim with n = v - dim * v_xx (the model parameter
/// equals the dimension). Needs dim in {1, 2, 3} and dim * extent <= L.
LiftedFields lift_field(const Field& v, int dim, const EpGridSpec& spec, double t = 0.0);

struct TimedField {
  double t = 0.0;
  Field v;
};

struct EpResidualReport {
  std::vector<double> max_norm;  // per component, over interior nodes and snapshots
  std::vector<double> l2_norm;   // per component, largest over snapshots
  double term_scale = 0.0;       // max |d_t m| seen, for relative statements
  double spacing = 0.0;
  double dt = 0.0;
  std::size_t evaluations = 0;

  double max() const;
};

/// Component-wise residual of
///   d_t m_i + sum_j u_j d_j m_i + sum_j (d_i u_j) m_j + m_i sum_j d_j u_j
/// with centred second-order differences in space and in time, at every snapshot
/// that has a neighbour on both sides. Snapshots must be uniformly spaced.
EpResidualReport ep_residual(std::span<const TimedField> snapshots, int dim, const EpGridSpec& spec);

/// Same on already lifted fields (all on one grid), so lifts can be tampered with.
EpResidualReport ep_residual(std::span<const LiftedFields> lifts);

}  // namespace dch

#endif

#ifndef DCH_RHS_HPP
#define DCH_RHS_HPP

#include <memory>

#include "dch/core.hpp"
#include "dch/helmholtz.hpp"
#include "dch/spectral.hpp"

namespace dch {

/// Scratch space for one simulation's right-hand-side evaluations. Single writer.
/// After rhs_v the buffers vx() and flux() hold v_x and P for the evaluated state;
/// the integrator hands them to the particle tracker as stage data.
class RhsWorkspace {
 public:
  RhsWorkspace(double d, const Grid& grid, bool dealias);

  double d() const { return op_.d(); }
  const Grid& grid() const { return op_.grid(); }
  bool dealias() const { return dealias_; }
  const HelmholtzOperator& helmholtz() const { return op_; }

  /// v_x from the most recent evaluation.
  const Field& vx() const { return vx_; }
  /// P = (1 - d d_xx)^{-1}(d v^2 + d^2/2 v_x^2) from the most recent evaluation.
  const Field& flux() const { return flux_; }

 private:
  friend Field nonlocal_flux(const Field& v, RhsWorkspace& ws);
  friend Field rhs_v(const Field& v, RhsWorkspace& ws);
  friend void rhs_v_into(const Field& v, RhsWorkspace& ws, Field& out);
  friend Field rhs_n(const Field& n, RhsWorkspace& ws);
  friend Field rhs_vx(const Field& v, RhsWorkspace& ws);

  // Fills vx_, flux_, and spec_rhs_ (the spectrum of -d v v_x - P_x).
  void evaluate(const Field& v);
  void truncate(Spectrum& s) const;

  HelmholtzOperator op_;
  bool dealias_;
  std::shared_ptr<const FftPlan> plan_;
  std::vector<double> k_;
  Spectrum spec_v_, spec_a_, spec_f_, spec_rhs_, spec_tmp_;
  Field vx_, flux_, prod_a_, prod_f_;
};

/// P = (1 - d d_xx)^{-1}(d v^2 + (d^2/2) v_x^2); products dealiased when enabled.
Field nonlocal_flux(const Field& v, RhsWorkspace& ws);

/// Velocity form: -d v v_x - d_x P.
Field rhs_v(const Field& v, RhsWorkspace& ws);
void rhs_v_into(const Field& v, RhsWorkspace& ws, Field& out);

/// Momentum form: -d v n_x - 2 d v_x n with v = (1 - d d_xx)^{-1} n.
Field rhs_n(const Field& n, RhsWorkspace& ws);

/// Right side of the slope equation along characteristics:
///   -(d/2) v_x^2 + v^2 - p_d * (v^2 + (d/2) v_x^2),
/// i.e. d_t v_x + d v v_xx. Diagnostics only; never used by the integrator.
Field rhs_vx(const Field& v, RhsWorkspace& ws);

}  // namespace dch

#endif

#ifndef DCH_HELMHOLTZ_HPP
#define DCH_HELMHOLTZ_HPP

#include <utility>
#include <vector>

#include "dch/core.hpp"
#include "dch/kernels.hpp"

namespace dch {

/// Green's kernel of (1 - d d_xx) on the line: exp(-|x|/sqrt d) / (2 sqrt d).
double green_kernel(double d, double x);

/// The operator 1 - d d_xx on a periodic grid and its inverse, as spectral
/// multipliers. Immutable; apply/invert are pure and safe to call concurrently.
class HelmholtzOperator {
 public:
  HelmholtzOperator(double d, const Grid& grid);

  double d() const { return d_; }
  const Grid& grid() const { return grid_; }
  /// 1 / (1 + d k^2) for j = 0 .. N/2.
  const std::vector<double>& inverse_multipliers() const { return inverse_; }

  /// v - d v_xx
  Field apply(const Field& v) const;
  /// Solves (1 - d d_xx) v = n.
  Field invert(const Field& n) const;

 private:
  double d_;
  Grid grid_;
  std::vector<double> inverse_;
};

inline Field helmholtz_apply(const Field& v, const HelmholtzOperator& op) { return op.apply(v); }
inline Field helmholtz_invert(const Field& n, const HelmholtzOperator& op) { return op.invert(n); }

using kernels::Support;

/// Quadrature route to p_d * n: an O(N^2) trapezoid sum with the kernel-kink
/// correction. Independent of the FFT path; used as its oracle.
/// With Support::compact the data must decay below 1e-12 (relative) at the box ends.
Field kernel_convolve_direct(const Field& n, double d, Support support = Support::compact);

/// Forward and backward exponential integrals whose sum is p_d * n:
///   R(x)  = 1/(2 sqrt d) e^{ x/sqrt d} int_x^inf  e^{-xi/sqrt d} n(xi) dxi
///   Lf(x) = 1/(2 sqrt d) e^{-x/sqrt d} int_-inf^x e^{ xi/sqrt d} n(xi) dxi
/// computed by two integrating-factor sweeps (no exp(x/sqrt d) overflow) with
/// end corrections. R - Lf = sqrt(d) d_x (p_d * n).
struct OneSidedSplit {
  Field forward;   // R
  Field backward;  // Lf
};
OneSidedSplit one_sided_split(const Field& n, double d);

}  // namespace dch

#endif

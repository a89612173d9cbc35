#ifndef DCH_ANALYSIS_HPP
#define DCH_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "dch/core.hpp"
#include "dch/lagrangian.hpp"
#include "dch/state.hpp"

namespace dch {

/// ||v||^2 + d ||v_x||^2 by the rectangle rule on the periodic grid.
double energy(const Field& v, double d);

struct SupNormBound {
  /// sqrt(E0 / sqrt d): from v^2 <= 2 ||v|| ||v_x|| <= E0 / sqrt d.
  double rigorous = 0.0;
  /// ||v0||_{H^1}, reported for comparison.
  double h1_norm = 0.0;
};
SupNormBound sup_norm_bound(const Field& v0, double d);

enum class Verdict {
  GlobalCase1,        // n0 >= 0 everywhere
  GlobalCase2,        // n0 <= 0 left of x0, >= 0 right of x0
  BlowupSlope,        // v0'(x0) < -|v0(x0)| / sqrt d
  BlowupSignPattern,  // n0 >= 0 left of x0, <= 0 right, n0 changes sign
  Indeterminate,
};

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& name);

struct Classification {
  Verdict verdict = Verdict::Indeterminate;
  /// Label the verdict refers to (slope point or sign-change point).
  std::optional<double> x0;

  /// min over nodes of v0' + |v0|/sqrt d, its location, and whether it is below
  /// -sign_tol * scale (the slope criterion holds).
  double slope_margin = 0.0;
  double slope_x0 = 0.0;
  bool slope_criterion = false;

  /// min n0 / max|n0|; >= -sign_tol for the first global case.
  double momentum_min_ratio = 0.0;
  double momentum_scale = 0.0;

  /// Smooth enough for the theorems: spectral tail of v0 below 1e-10.
  bool regular = true;
  double spectral_tail = 0.0;

  /// Certified blow-up time when the slope criterion holds.
  std::optional<double> blowup_time_bound;

  std::vector<std::string> warnings;
};

Classification classify_initial_data(const Field& v0, const SimParams& params);

struct ConvolutionMargins {
  double F = 0.0;      // min_x F(w, V) - w^2/2
  double G = 0.0;      // min_x G(w, V) - w^2/2
  double P = 0.0;      // min_x p_d * (w^2 + V^2/2) - w^2/2
  double scale = 0.0;  // max_x (w^2 + V^2/2)
};

/// Margins of F >= w^2/2, G >= w^2/2 and p_d*(w^2 + V^2/2) >= w^2/2 with
/// w = v/sqrt d, V = v_x. The densities are formed on a twice-refined grid from
/// the trigonometric interpolant of v, where the quadratic products are exact, and
/// F = (1 - sqrt d d_x)^{-1} f, G = (1 + sqrt d d_x)^{-1} f.
ConvolutionMargins convolution_inequality_margin(const Field& v, double d);
inline ConvolutionMargins convolution_inequality_margin(const SimState& s) {
  return convolution_inequality_margin(s.v(), s.d());
}

/// Same margins with F = 2R, G = 2Lf from the quadrature sweeps on the native grid.
ConvolutionMargins convolution_inequality_margin_quadrature(const Field& v, double d);

struct RiccatiSample {
  double t = 0.0;
  double q = 0.0;  // position of the x0 characteristic
  double g = 0.0;  // V along it
  double A = 0.0;  // w - V
  double B = 0.0;  // w + V
};

struct RiccatiTrace {
  std::vector<RiccatiSample> samples;

  /// Appends g, A, B along the marker with label x0. g is the slope carried by the
  /// marker, w is interpolated from the field.
  void record(const SimState& state, const ParticleSet& p, double x0_label);
  /// g(0) + (d/2) A(0) B(0) t
  double linear_bound(double t, double d) const;
};

struct RiccatiReport {
  std::size_t samples = 0;
  double worst_linear_excess = 0.0;  // max g(t) - linear bound (<= tol to pass)
  double worst_A_drop = 0.0;         // max A(0) - A(t)
  double worst_B_rise = 0.0;         // max B(t) - B(0)
  bool signs_persist = true;         // A > 0 > B throughout
  bool linear_bound_ok = true;
  bool monotone_ok = true;

  bool ok() const { return linear_bound_ok && monotone_ok && signs_persist; }
};

/// Checks the Riccati chain along a blow-up characteristic with absolute tolerance tol.
RiccatiReport riccati_tracker(const RiccatiTrace& trace, double d, double tol);

/// Upper bound on the blow-up time from the slope g0 and w0 = v0(x0)/sqrt d at x0
/// and a sup-norm bound M on v: the linear decay of g until |g| >= sqrt(2/d) M,
/// followed by g' <= -(d/4) g^2. Throws unless g0 < -|w0|.
double blowup_time_upper_bound(double g0, double w0, double sup_bound, double d);
double blowup_time_upper_bound(const Field& v0, double d, double x0);

struct Case1Bound {
  double violation = 0.0;  // max_x |v_x| - v/sqrt d
  double min_v = 0.0;
};
Case1Bound case1_pointwise_bound(const SimState& state, double d);

/// max_x (-v_x - |v|/sqrt d)
double case2_onesided_bound(const SimState& state, double d);

/// max |v| over the outer 5% of the box on each side, relative to max|v|.
double boundary_contamination(const Field& v);
inline double boundary_contamination(const SimState& s) { return boundary_contamination(s.v()); }

/// u(y) = sqrt(d) v(sqrt(d) y) on the grid of half-width L / sqrt d with the same N.
/// Carries a solution of the equation with parameter d onto one with parameter 1;
/// nodes map onto nodes, so the values are just rescaled.
Field scale_to_unit(const Field& v, double d);
/// Inverse of scale_to_unit.
Field scale_from_unit(const Field& u, double d);

/// Contamination above which the periodic box no longer stands in for the line.
inline constexpr double kContaminationFlag = 1e-8;

}  // namespace dch

#endif

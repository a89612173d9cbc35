#include "dch/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dch/helmholtz.hpp"
#include "dch/spectral.hpp"

namespace dch {

double energy(const Field& v, double d) {
  const Field vx = spectral_derivative(v, 1);
  double a = 0.0;
  double b = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    a += v[j] * v[j];
    b += vx[j] * vx[j];
  }
  return v.grid().spacing * (a + d * b);
}

SupNormBound sup_norm_bound(const Field& v0, double d) {
  const Field vx = spectral_derivative(v0, 1);
  double a = 0.0;
  double b = 0.0;
  for (std::size_t j = 0; j < v0.size(); ++j) {
    a += v0[j] * v0[j];
    b += vx[j] * vx[j];
  }
  const double h = v0.grid().spacing;
  return {std::sqrt(h * (a + d * b) / std::sqrt(d)), std::sqrt(h * (a + b))};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::GlobalCase1:
      return "GlobalCase1";
    case Verdict::GlobalCase2:
      return "GlobalCase2";
    case Verdict::BlowupSlope:
      return "BlowupSlope";
    case Verdict::BlowupSignPattern:
      return "BlowupSignPattern";
    case Verdict::Indeterminate:
      return "Indeterminate";
  }
  return "Indeterminate";
}

Verdict verdict_from_string(const std::string& name) {
  for (Verdict v : {Verdict::GlobalCase1, Verdict::GlobalCase2, Verdict::BlowupSlope, Verdict::BlowupSignPattern,
                    Verdict::Indeterminate}) {
    if (to_string(v) == name) return v;
  }
  throw Error("unknown verdict '" + name + "'");
}

namespace {

// Point between the last node of the first sign group (a) and the first node of the
// second (b): the middle node when nodes lie in between, else the linear crossing.
double sign_change_point(const Field& n, std::size_t a, std::size_t b) {
  const Grid& g = n.grid();
  if (b > a + 1) return g.node((a + b) / 2);
  const double fa = n[a];
  const double fb = n[b];
  return g.node(a) + g.spacing * fa / (fa - fb);
}

}  // namespace

Classification classify_initial_data(const Field& v0, const SimParams& params) {
  params.validate();
  if (!(v0.grid() == params.grid)) throw Error("initial data grid differs from the simulation grid");
  v0.require_finite("initial data");
  const double d = params.d;
  const double sd = std::sqrt(d);
  const Grid& grid = v0.grid();
  const std::size_t N = grid.n_points;

  Classification out;
  const Field vx = spectral_derivative(v0, 1);
  const Field n0 = HelmholtzOperator(d, grid).apply(v0);

  out.spectral_tail = spectral_tail(v0);
  out.regular = out.spectral_tail < 1e-10;
  if (!out.regular) out.warnings.push_back("initial data is not resolved; verdict may not apply");

  // Slope criterion at the node minimizing v0' + |v0|/sqrt d.
  std::size_t js = 0;
  out.slope_margin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < N; ++j) {
    const double m = vx[j] + std::abs(v0[j]) / sd;
    if (m < out.slope_margin) {
      out.slope_margin = m;
      js = j;
    }
  }
  out.slope_x0 = grid.node(js);
  const double slope_scale = vx.max_abs() + v0.max_abs() / sd;
  out.slope_criterion = out.slope_margin < -params.sign_tol * slope_scale;

  // Sign structure of n0.
  out.momentum_scale = n0.max_abs();
  out.momentum_min_ratio = out.momentum_scale > 0.0 ? n0.min() / out.momentum_scale : 0.0;
  const double tol = params.sign_tol * out.momentum_scale;
  std::size_t first_neg = N, last_neg = 0, first_pos = N, last_pos = 0;
  for (std::size_t j = 0; j < N; ++j) {
    if (n0[j] < -tol) {
      first_neg = std::min(first_neg, j);
      last_neg = j;
    } else if (n0[j] > tol) {
      first_pos = std::min(first_pos, j);
      last_pos = j;
    }
  }
  const bool any_neg = first_neg < N;
  const bool any_pos = first_pos < N;
  const bool case1 = !any_neg;
  const bool case2 = any_neg && (!any_pos || last_neg < first_pos);
  const bool pattern = any_neg && any_pos && last_pos < first_neg;

  if (out.slope_criterion) {
    const double M = sup_norm_bound(v0, d).rigorous;
    out.blowup_time_bound = blowup_time_upper_bound(vx[js], v0[js] / sd, M, d);
  }

  if (pattern) {
    out.verdict = Verdict::BlowupSignPattern;
    out.x0 = sign_change_point(n0, last_pos, first_neg);
  } else if (out.slope_criterion) {
    out.verdict = Verdict::BlowupSlope;
    out.x0 = out.slope_x0;
    if (case1 || case2) out.warnings.push_back("slope criterion and a global sign condition both hold within tolerance");
  } else if (case1) {
    out.verdict = Verdict::GlobalCase1;
  } else if (case2) {
    out.verdict = Verdict::GlobalCase2;
    out.x0 = any_pos ? sign_change_point(n0, last_neg, first_pos) : sign_change_point(n0, last_neg, N - 1);
  } else {
    out.verdict = Verdict::Indeterminate;
  }
  return out;
}

ConvolutionMargins convolution_inequality_margin(const Field& v, double d) {
  if (!(d > 0.0)) throw Error("d must be positive");
  v.require_finite("velocity");
  const double sd = std::sqrt(d);
  const Field vf = upsample(v, 2);
  const Field Vf = spectral_derivative(vf, 1);
  Field f(vf.grid());
  Field half_w2(vf.grid());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double w = vf[j] / sd;
    half_w2[j] = 0.5 * w * w;
    f[j] = w * w + 0.5 * Vf[j] * Vf[j];
  }
  const Complex I(0.0, 1.0);
  const Field F = apply_symbol(f, [&](double k, std::size_t) { return 1.0 / (1.0 - I * sd * k); });
  const Field G = apply_symbol(f, [&](double k, std::size_t) { return 1.0 / (1.0 + I * sd * k); });
  const Field P = apply_symbol(f, [&](double k, std::size_t) { return Complex(1.0 / (1.0 + d * k * k)); });

  ConvolutionMargins m;
  m.F = m.G = m.P = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < f.size(); ++j) {
    m.F = std::min(m.F, F[j] - half_w2[j]);
    m.G = std::min(m.G, G[j] - half_w2[j]);
    m.P = std::min(m.P, P[j] - half_w2[j]);
  }
  m.scale = f.max();
  return m;
}

ConvolutionMargins convolution_inequality_margin_quadrature(const Field& v, double d) {
  if (!(d > 0.0)) throw Error("d must be positive");
  const double sd = std::sqrt(d);
  const Field V = spectral_derivative(v, 1);
  Field f(v.grid());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double w = v[j] / sd;
    f[j] = w * w + 0.5 * V[j] * V[j];
  }
  const OneSidedSplit split = one_sided_split(f, d);
  ConvolutionMargins m;
  m.F = m.G = m.P = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double w = v[j] / sd;
    const double half_w2 = 0.5 * w * w;
    m.F = std::min(m.F, 2.0 * split.forward[j] - half_w2);
    m.G = std::min(m.G, 2.0 * split.backward[j] - half_w2);
    m.P = std::min(m.P, split.forward[j] + split.backward[j] - half_w2);
  }
  m.scale = f.max();
  return m;
}

void RiccatiTrace::record(const SimState& state, const ParticleSet& p, double x0_label) {
  const std::size_t i = p.index_of_label(x0_label);
  const double w = interp(state.v(), p.positions[i]) / std::sqrt(state.d());
  const double g = p.slope[i];
  samples.push_back({state.t, p.positions[i], g, w - g, w + g});
}

double RiccatiTrace::linear_bound(double t, double d) const {
  if (samples.empty()) throw Error("Riccati trace is empty");
  const RiccatiSample& s0 = samples.front();
  return s0.g + 0.5 * d * s0.A * s0.B * (t - s0.t);
}

RiccatiReport riccati_tracker(const RiccatiTrace& trace, double d, double tol) {
  if (trace.samples.empty()) throw Error("Riccati trace is empty");
  const RiccatiSample& s0 = trace.samples.front();
  RiccatiReport r;
  r.samples = trace.samples.size();
  r.worst_linear_excess = -std::numeric_limits<double>::infinity();
  for (const RiccatiSample& s : trace.samples) {
    r.worst_linear_excess = std::max(r.worst_linear_excess, s.g - trace.linear_bound(s.t, d));
    r.worst_A_drop = std::max(r.worst_A_drop, s0.A - s.A);
    r.worst_B_rise = std::max(r.worst_B_rise, s.B - s0.B);
    if (!(s.A > 0.0 && s.B < 0.0)) r.signs_persist = false;
  }
  r.linear_bound_ok = r.worst_linear_excess <= tol;
  r.monotone_ok = r.worst_A_drop <= tol && r.worst_B_rise <= tol;
  return r;
}

double blowup_time_upper_bound(double g0, double w0, double sup_bound, double d) {
  if (!(d > 0.0)) throw Error("d must be positive");
  if (!(g0 < -std::abs(w0))) throw Error("blow-up bound needs v0'(x0) < -|v0(x0)|/sqrt d");
  if (!(sup_bound >= 0.0)) throw Error("sup-norm bound must be non-negative");
  const double gc = std::sqrt(2.0 / d) * sup_bound;
  const double rate = 0.5 * d * (g0 * g0 - w0 * w0);
  const double t0 = std::max(0.0, (g0 + gc) / rate);
  const double g_at_t0 = g0 - rate * t0;
  return t0 + 4.0 / (d * std::max(gc, -g_at_t0));
}

double blowup_time_upper_bound(const Field& v0, double d, double x0) {
  const double g0 = interp(spectral_derivative(v0, 1), x0);
  const double w0 = interp(v0, x0) / std::sqrt(d);
  return blowup_time_upper_bound(g0, w0, sup_norm_bound(v0, d).rigorous, d);
}

Case1Bound case1_pointwise_bound(const SimState& state, double d) {
  const Field& v = state.v();
  const Field& vx = state.vx();
  const double sd = std::sqrt(d);
  Case1Bound b;
  b.violation = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < v.size(); ++j) b.violation = std::max(b.violation, std::abs(vx[j]) - v[j] / sd);
  b.min_v = v.min();
  return b;
}

double case2_onesided_bound(const SimState& state, double d) {
  const Field& v = state.v();
  const Field& vx = state.vx();
  const double sd = std::sqrt(d);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < v.size(); ++j) worst = std::max(worst, -vx[j] - std::abs(v[j]) / sd);
  return worst;
}

double boundary_contamination(const Field& v) {
  const std::size_t N = v.size();
  const std::size_t band = std::max<std::size_t>(1, N / 20);
  double edge = 0.0;
  for (std::size_t j = 0; j < band; ++j) edge = std::max({edge, std::abs(v[j]), std::abs(v[N - 1 - j])});
  const double peak = v.max_abs();
  return peak > 0.0 ? edge / peak : 0.0;
}

Field scale_to_unit(const Field& v, double d) {
  if (!(d > 0.0)) throw Error("d must be positive");
  const double sd = std::sqrt(d);
  Field u(build_grid(v.grid().half_width / sd, v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) u[j] = sd * v[j];
  return u;
}

Field scale_from_unit(const Field& u, double d) {
  if (!(d > 0.0)) throw Error("d must be positive");
  const double sd = std::sqrt(d);
  Field v(build_grid(u.grid().half_width * sd, u.size()));
  for (std::size_t j = 0; j < u.size(); ++j) v[j] = u[j] / sd;
  return v;
}

}  // namespace dch

#include "dch/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dch/kernels.hpp"

namespace dch {

double interp(const Field& f, double x) { return kernels::cubic_interp(f.values(), f.grid().half_width, x); }

std::size_t ParticleSet::index_of_label(double x0) const {
  const auto it = std::find(labels.begin(), labels.end(), x0);
  if (it == labels.end()) throw Error("no particle carries the requested label");
  return static_cast<std::size_t>(it - labels.begin());
}

ParticleSet seed_particles(const Field& n0, const Field& vx0, std::size_t count, std::optional<double> forced_label) {
  if (count < 2) throw Error("need at least two particles");
  const double threshold = 1e-6 * n0.max_abs();
  std::size_t lo = n0.size();
  std::size_t hi = 0;
  for (std::size_t j = 0; j < n0.size(); ++j) {
    if (std::abs(n0[j]) > threshold) {
      lo = std::min(lo, j);
      hi = std::max(hi, j);
    }
  }
  if (lo >= hi) {
    lo = 0;
    hi = n0.size() - 1;
  }
  const double a = n0.grid().node(lo);
  const double b = n0.grid().node(hi);

  std::vector<double> labels;
  labels.reserve(count + 1);
  for (std::size_t i = 0; i < count; ++i) {
    labels.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  if (forced_label && std::find(labels.begin(), labels.end(), *forced_label) == labels.end()) {
    labels.push_back(*forced_label);
  }
  std::sort(labels.begin(), labels.end());

  ParticleSet p;
  p.labels = labels;
  p.positions = labels;
  p.log_jacobian.assign(labels.size(), 0.0);
  p.slope.resize(labels.size());
  p.momentum0.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    p.slope[i] = interp(vx0, labels[i]);
    p.momentum0[i] = interp(n0, labels[i]);
  }
  return p;
}

namespace {

struct Rates {
  std::vector<double> q, l, s;
};

void rates(const std::vector<double>& q, const std::vector<double>& s, const StageSnapshot& stage, double d,
           Rates& out) {
  const std::size_t m = q.size();
  out.q.resize(m);
  out.l.resize(m);
  out.s.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double v = interp(stage.v, q[i]);
    out.q[i] = d * v;
    out.l[i] = d * interp(stage.vx, q[i]);
    out.s[i] = -0.5 * d * s[i] * s[i] + v * v - interp(stage.flux, q[i]) / d;
  }
}

}  // namespace

ParticleSet advance_particles(const ParticleSet& p, const std::array<StageSnapshot, 4>& stages, double dt,
                              double d) {
  static constexpr double kStageOffset[4] = {0.0, 0.5, 0.5, 1.0};
  static constexpr double kWeight[4] = {1.0, 2.0, 2.0, 1.0};
  const std::size_t m = p.size();

  ParticleSet out = p;
  std::vector<double> q(m), s(m);
  Rates k;
  for (int stage = 0; stage < 4; ++stage) {
    const double c = kStageOffset[stage] * dt;
    for (std::size_t i = 0; i < m; ++i) {
      q[i] = stage == 0 ? p.positions[i] : p.positions[i] + c * k.q[i];
      s[i] = stage == 0 ? p.slope[i] : p.slope[i] + c * k.s[i];
    }
    rates(q, s, stages[static_cast<std::size_t>(stage)], d, k);
    const double w = kWeight[stage] * dt / 6.0;
    for (std::size_t i = 0; i < m; ++i) {
      out.positions[i] += w * k.q[i];
      out.log_jacobian[i] += w * k.l[i];
      out.slope[i] += w * k.s[i];
    }
  }

  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (!(out.positions[i] < out.positions[i + 1])) {
      ++out.ordering_violations;
      break;
    }
  }
  return out;
}

double momentum_invariant_residual(const SimState& state, const ParticleSet& p) {
  const Field& n = state.n();
  double scale = 0.0;
  for (double n0 : p.momentum0) scale = std::max(scale, std::abs(n0));
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double transported = interp(n, p.positions[i]) * std::exp(2.0 * p.log_jacobian[i]);
    worst = std::max(worst, std::abs(transported - p.momentum0[i]));
  }
  return worst / (std::numeric_limits<double>::epsilon() + scale);
}

double jacobian_consistency(const ParticleSet& p) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const double fd = (p.positions[i + 1] - p.positions[i - 1]) / (p.labels[i + 1] - p.labels[i - 1]);
    const double jac = std::exp(p.log_jacobian[i]);
    worst = std::max(worst, std::abs(fd - jac) / jac);
  }
  return worst;
}

SignFrontier sign_frontier(const SimState& state, const ParticleSet& p, double x0_label, SignPattern pattern) {
  const std::size_t idx = p.index_of_label(x0_label);
  SignFrontier out;
  out.frontier = p.positions[idx];
  const Field& n = state.n();
  const double sign = pattern == SignPattern::negative_then_positive ? 1.0 : -1.0;
  for (std::size_t j = 0; j < n.size(); ++j) {
    const double x = n.grid().node(j);
    const double value = sign * n[j];
    if (x <= out.frontier) out.left_violation = std::max(out.left_violation, value);
    if (x >= out.frontier) out.right_violation = std::max(out.right_violation, -value);
  }
  return out;
}

}  // namespace dch

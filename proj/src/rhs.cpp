#include "dch/rhs.hpp"

#include "dch/kernels.hpp"

namespace dch {

namespace {

void normalize(Field& f) {
  const double scale = 1.0 / static_cast<double>(f.size());
  for (double& x : f.values()) x *= scale;
}

}  // namespace

RhsWorkspace::RhsWorkspace(double d, const Grid& grid, bool dealias)
    : op_(d, grid),
      dealias_(dealias),
      plan_(FftPlan::get(grid.n_points)),
      k_(wavenumbers(grid)),
      spec_v_(plan_->spectrum_size()),
      spec_a_(plan_->spectrum_size()),
      spec_f_(plan_->spectrum_size()),
      spec_rhs_(plan_->spectrum_size()),
      spec_tmp_(plan_->spectrum_size()),
      vx_(grid),
      flux_(grid),
      prod_a_(grid),
      prod_f_(grid) {}

void RhsWorkspace::truncate(Spectrum& s) const {
  if (dealias_) dch::dealias(s, grid().n_points);
}

void RhsWorkspace::evaluate(const Field& v) {
  const std::size_t half = spec_v_.size();
  const std::size_t nyquist = half - 1;
  const double d = op_.d();

  plan_->forward(v.values(), spec_v_);
  for (std::size_t j = 0; j < half; ++j) spec_tmp_[j] = Complex(0.0, k_[j]) * spec_v_[j];
  spec_tmp_[nyquist] = 0.0;
  plan_->inverse(spec_tmp_, vx_.values());
  normalize(vx_);

  kernels::omp::multiply(v.values(), vx_.values(), prod_a_.values());
  for (std::size_t j = 0; j < v.size(); ++j) {
    prod_f_[j] = d * v[j] * v[j] + 0.5 * d * d * vx_[j] * vx_[j];
  }
  plan_->forward(prod_a_.values(), spec_a_);
  plan_->forward(prod_f_.values(), spec_f_);
  truncate(spec_a_);
  truncate(spec_f_);

  const auto& inv = op_.inverse_multipliers();
  for (std::size_t j = 0; j < half; ++j) {
    spec_f_[j] *= inv[j];
    spec_rhs_[j] = -d * spec_a_[j] - Complex(0.0, k_[j]) * spec_f_[j];
  }
  spec_rhs_[nyquist] = Complex(-d * spec_a_[nyquist].real(), 0.0);

  spec_tmp_ = spec_f_;
  plan_->inverse(spec_tmp_, flux_.values());
  normalize(flux_);
}

Field nonlocal_flux(const Field& v, RhsWorkspace& ws) {
  v.require_finite("nonlocal_flux input");
  ws.evaluate(v);
  return ws.flux_;
}

void rhs_v_into(const Field& v, RhsWorkspace& ws, Field& out) {
  v.require_finite("rhs_v input");
  ws.evaluate(v);
  ws.spec_tmp_ = ws.spec_rhs_;
  ws.plan_->inverse(ws.spec_tmp_, out.values());
  normalize(out);
}

Field rhs_v(const Field& v, RhsWorkspace& ws) {
  Field out(v.grid());
  rhs_v_into(v, ws, out);
  return out;
}

Field rhs_n(const Field& n, RhsWorkspace& ws) {
  n.require_finite("rhs_n input");
  const double d = ws.d();
  const Field v = ws.op_.invert(n);
  const Field vx = spectral_derivative(v, 1);
  const Field nx = spectral_derivative(n, 1);
  Field transport(n.grid());
  Field stretch(n.grid());
  kernels::omp::multiply(v.values(), nx.values(), transport.values());
  kernels::omp::multiply(vx.values(), n.values(), stretch.values());
  if (ws.dealias_) {
    dealias(transport);
    dealias(stretch);
  }
  Field out(n.grid());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = -d * transport[j] - 2.0 * d * stretch[j];
  return out;
}

Field rhs_vx(const Field& v, RhsWorkspace& ws) {
  v.require_finite("rhs_vx input");
  const double d = ws.d();
  ws.evaluate(v);
  Field out(v.grid());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double vx = ws.vx_[j];
    out[j] = -0.5 * d * vx * vx + v[j] * v[j] - ws.flux_[j] / d;
  }
  return out;
}

}  // namespace dch

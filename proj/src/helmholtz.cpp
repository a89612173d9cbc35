#include "dch/helmholtz.hpp"

#include <cmath>

#include "dch/spectral.hpp"

namespace dch {

double green_kernel(double d, double x) {
  const double a = std::sqrt(d);
  return std::exp(-std::abs(x) / a) / (2.0 * a);
}

HelmholtzOperator::HelmholtzOperator(double d, const Grid& grid) : d_(d), grid_(grid) {
  if (!(d >= 1.0)) throw Error("Helmholtz parameter d must be >= 1");
  const auto k = wavenumbers(grid);
  inverse_.resize(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) inverse_[j] = 1.0 / (1.0 + d * k[j] * k[j]);
  inverse_[0] = 1.0;
}

Field HelmholtzOperator::apply(const Field& v) const {
  v.require_finite("helmholtz_apply input");
  return apply_symbol(v, [this](double, std::size_t j) { return Complex(1.0 / inverse_[j], 0.0); });
}

Field HelmholtzOperator::invert(const Field& n) const {
  n.require_finite("helmholtz_invert input");
  return apply_symbol(n, [this](double, std::size_t j) { return Complex(inverse_[j], 0.0); });
}

namespace {

constexpr double kDecayTol = 1e-12;

}  // namespace

Field kernel_convolve_direct(const Field& n, double d, Support support) {
  n.require_finite("kernel_convolve_direct input");
  if (support == Support::compact) require_boundary_decay(n, kDecayTol, "convolution data");
  Field out(n.grid());
  const kernels::ConvolutionSpec spec{d, n.grid().spacing, n.grid().half_width, support};
  kernels::omp::convolve(n.values(), out.values(), spec);
  return out;
}

OneSidedSplit one_sided_split(const Field& n, double d) {
  n.require_finite("one_sided_split input");
  require_boundary_decay(n, kDecayTol, "split data");
  const std::size_t size = n.size();
  const double h = n.grid().spacing;
  const double a = std::sqrt(d);
  const double r = std::exp(-h / a);
  const double norm = 1.0 / (2.0 * a);
  const double em = h * h / 12.0;

  // Centred first difference; the data vanishes beyond the box.
  auto slope = [&](std::size_t j) {
    const double left = j > 0 ? n[j - 1] : 0.0;
    const double right = j + 1 < size ? n[j + 1] : 0.0;
    return (right - left) / (2.0 * h);
  };

  OneSidedSplit out{Field(n.grid()), Field(n.grid())};

  double acc = 0.0;
  for (std::size_t j = 0; j < size; ++j) {
    if (j > 0) acc = acc * r + 0.5 * h * (n[j - 1] * r + n[j]);
    out.backward[j] = norm * (acc - em * (slope(j) + n[j] / a));
  }
  acc = 0.0;
  for (std::size_t j = size; j-- > 0;) {
    if (j + 1 < size) acc = acc * r + 0.5 * h * (n[j + 1] * r + n[j]);
    out.forward[j] = norm * (acc + em * (slope(j) - n[j] / a));
  }
  return out;
}

}  // namespace dch

#include "dch/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <vector>

namespace dch::kernels {

namespace {

// Below this many elements pointwise loops stay on one thread.
constexpr std::ptrdiff_t kParallelThreshold = 1 << 15;

// K[m] for index offset m; compact uses |i-j|, periodic uses (i-j) mod N.
std::vector<double> kernel_table(std::size_t n, const ConvolutionSpec& spec) {
  const double a = std::sqrt(spec.d);
  const double norm = 1.0 / (2.0 * a);
  std::vector<double> table(n);
  if (spec.support == Support::compact) {
    for (std::size_t m = 0; m < n; ++m) table[m] = norm * std::exp(-static_cast<double>(m) * spec.spacing / a);
  } else {
    const double period = 2.0 * spec.half_width;
    const double denom = -std::expm1(-period / a);
    for (std::size_t m = 0; m < n; ++m) {
      const double r = static_cast<double>(m) * spec.spacing;
      table[m] = norm * (std::exp(-r / a) + std::exp(-(period - r) / a)) / denom;
    }
  }
  return table;
}

inline double convolve_row(std::size_t i, std::span<const double> n, const std::vector<double>& table,
                           const ConvolutionSpec& spec) {
  const std::size_t size = n.size();
  double sum = 0.0;
  if (spec.support == Support::compact) {
    for (std::size_t j = 0; j < size; ++j) {
      const std::size_t m = i > j ? i - j : j - i;
      const double w = (j == 0 || j + 1 == size) ? 0.5 : 1.0;
      sum += w * table[m] * n[j];
    }
  } else {
    for (std::size_t j = 0; j < size; ++j) {
      const std::size_t m = i >= j ? i - j : i + size - j;
      sum += table[m] * n[j];
    }
  }
  // Euler-Maclaurin correction for the kink of the kernel at x_i.
  return spec.spacing * sum - spec.spacing * spec.spacing * n[i] / (12.0 * spec.d);
}

inline double interp_weights_apply(std::span<const double> f, double half_width, double x) {
  const std::size_t n = f.size();
  const double h = 2.0 * half_width / static_cast<double>(n);
  double t = std::fmod(x + half_width, 2.0 * half_width);
  if (t < 0.0) t += 2.0 * half_width;
  const double s = t / h;
  double base = std::floor(s);
  const double th = s - base;
  const auto j = static_cast<std::ptrdiff_t>(base);
  const auto nn = static_cast<std::ptrdiff_t>(n);
  auto at = [&](std::ptrdiff_t k) { return f[static_cast<std::size_t>(((k % nn) + nn) % nn)]; };
  const double wm1 = -th * (th - 1.0) * (th - 2.0) / 6.0;
  const double w0 = (th + 1.0) * (th - 1.0) * (th - 2.0) / 2.0;
  const double w1 = -(th + 1.0) * th * (th - 2.0) / 2.0;
  const double w2 = (th + 1.0) * th * (th - 1.0) / 6.0;
  return wm1 * at(j - 1) + w0 * at(j) + w1 * at(j + 1) + w2 * at(j + 2);
}

inline double ep_point(const EpStencilInput& in, std::size_t flat, const std::vector<std::size_t>& stride) {
  const int dim = in.grid.dim;
  const double inv2h = 1.0 / (2.0 * in.grid.spacing);
  const double* mi = in.m[static_cast<std::size_t>(in.component)];
  const std::size_t si = stride[static_cast<std::size_t>(in.component)];
  double r = (in.m_next_i[flat] - in.m_prev_i[flat]) / (2.0 * in.dt);
  double div_u = 0.0;
  for (int j = 0; j < dim; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const std::size_t sj = stride[ju];
    const double* uj = in.u[ju];
    const double* mj = in.m[ju];
    r += uj[flat] * (mi[flat + sj] - mi[flat - sj]) * inv2h;
    r += (uj[flat + si] - uj[flat - si]) * inv2h * mj[flat];
    div_u += (uj[flat + sj] - uj[flat - sj]) * inv2h;
  }
  return r + mi[flat] * div_u;
}

bool is_interior(std::size_t flat, const RidgeGrid& g) {
  for (int k = 0; k < g.dim; ++k) {
    const std::size_t i = flat % g.points;
    if (i == 0 || i + 1 == g.points) return false;
    flat /= g.points;
  }
  return true;
}

std::vector<std::size_t> strides(const RidgeGrid& g) {
  std::vector<std::size_t> s(static_cast<std::size_t>(g.dim));
  std::size_t acc = 1;
  for (int k = 0; k < g.dim; ++k) {
    s[static_cast<std::size_t>(k)] = acc;
    acc *= g.points;
  }
  return s;
}

}  // namespace

std::size_t RidgeGrid::total() const {
  std::size_t t = 1;
  for (int k = 0; k < dim; ++k) t *= points;
  return t;
}

double RidgeGrid::diagonal(std::size_t flat) const {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    s += -extent + static_cast<double>(flat % points) * spacing;
    flat /= points;
  }
  return s;
}

double cubic_interp(std::span<const double> samples, double half_width, double x) {
  return interp_weights_apply(samples, half_width, x);
}

namespace serial {

void convolve(std::span<const double> n, std::span<double> out, const ConvolutionSpec& spec) {
  const auto table = kernel_table(n.size(), spec);
  for (std::size_t i = 0; i < n.size(); ++i) out[i] = convolve_row(i, n, table, spec);
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

void axpy_to(double alpha, std::span<const double> x, std::span<const double> y, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[i] + alpha * x[i];
}

void ridge_sample(std::span<const double> samples, double half_width, const RidgeGrid& grid,
                  std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = interp_weights_apply(samples, half_width, grid.diagonal(i));
  }
}

void ep_residual(const EpStencilInput& in, std::span<double> out) {
  const auto stride = strides(in.grid);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = is_interior(i, in.grid) ? ep_point(in, i, stride) : 0.0;
}

}  // namespace serial

namespace omp {

void convolve(std::span<const double> n, std::span<double> out, const ConvolutionSpec& spec) {
  const auto table = kernel_table(n.size(), spec);
  const auto size = static_cast<std::ptrdiff_t>(n.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < size; ++i) {
    out[static_cast<std::size_t>(i)] = convolve_row(static_cast<std::size_t>(i), n, table, spec);
  }
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const auto size = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < size; ++i) out[i] = a[i] * b[i];
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const auto size = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < size; ++i) y[i] += alpha * x[i];
}

void axpy_to(double alpha, std::span<const double> x, std::span<const double> y, std::span<double> out) {
  const auto size = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < size; ++i) out[i] = y[i] + alpha * x[i];
}

void ridge_sample(std::span<const double> samples, double half_width, const RidgeGrid& grid,
                  std::span<double> out) {
  const auto size = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < size; ++i) {
    out[i] = interp_weights_apply(samples, half_width, grid.diagonal(static_cast<std::size_t>(i)));
  }
}

void ep_residual(const EpStencilInput& in, std::span<double> out) {
  const auto stride = strides(in.grid);
  const auto size = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < size; ++i) {
    const auto flat = static_cast<std::size_t>(i);
    out[flat] = is_interior(flat, in.grid) ? ep_point(in, flat, stride) : 0.0;
  }
}

}  // namespace omp

}  // namespace dch::kernels

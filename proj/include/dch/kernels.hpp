#ifndef DCH_KERNELS_HPP
#define DCH_KERNELS_HPP

// Data-parallel inner loops. Every kernel has a serial reference in
// dch::kernels::serial and an OpenMP version in dch::kernels::omp with the same
// signature. Each output element is computed by one thread with the same
// summation order, so the two agree bit for bit.

#include <cstddef>
#include <span>

namespace dch::kernels {

/// Kernel family used by the O(N^2) quadrature convolution.
enum class Support {
  /// Data supported in the box, convolved with p_d on the real line.
  compact,
  /// Data periodic on the box, convolved with the periodized kernel.
  periodic,
};

struct ConvolutionSpec {
  double d = 1.0;
  double spacing = 0.0;
  double half_width = 0.0;
  Support support = Support::periodic;
};

/// Geometry of a ridge-function lift onto a d-dimensional tensor grid.
struct RidgeGrid {
  int dim = 1;
  std::size_t points = 0;  // per axis
  double extent = 0.0;     // axis nodes are -extent + i * spacing
  double spacing = 0.0;

  std::size_t total() const;
  /// Sum of coordinates x_1 + ... + x_d at flat index `flat`.
  double diagonal(std::size_t flat) const;
};

/// Terms of component i of the Euler-Poincare momentum equation on interior nodes.
struct EpStencilInput {
  RidgeGrid grid;
  // Component arrays u_j, m_j at the middle snapshot, and m_i at the neighbours in time.
  std::span<const double* const> u;
  std::span<const double* const> m;
  const double* m_prev_i = nullptr;
  const double* m_next_i = nullptr;
  double dt = 0.0;
  int component = 0;
};

namespace serial {

/// out_i = h * sum_j K(x_i - x_j) n_j - h^2 n_i / (12 d), K = p_d or its periodization.
void convolve(std::span<const double> n, std::span<double> out, const ConvolutionSpec& spec);
/// out = a * b
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// out = y + alpha * x
void axpy_to(double alpha, std::span<const double> x, std::span<const double> y, std::span<double> out);
/// out[flat] = profile(diagonal(flat)), profile given by periodic cubic interpolation of samples.
void ridge_sample(std::span<const double> samples, double half_width, const RidgeGrid& grid,
                  std::span<double> out);
/// Residual of component `component` at interior nodes (others left at 0).
void ep_residual(const EpStencilInput& in, std::span<double> out);

}  // namespace serial

namespace omp {

void convolve(std::span<const double> n, std::span<double> out, const ConvolutionSpec& spec);
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void axpy_to(double alpha, std::span<const double> x, std::span<const double> y, std::span<double> out);
void ridge_sample(std::span<const double> samples, double half_width, const RidgeGrid& grid,
                  std::span<double> out);
void ep_residual(const EpStencilInput& in, std::span<double> out);

}  // namespace omp

/// Periodic 4-point (cubic) Lagrange interpolation of uniform samples on [-L, L).
double cubic_interp(std::span<const double> samples, double half_width, double x);

}  // namespace dch::kernels

#endif

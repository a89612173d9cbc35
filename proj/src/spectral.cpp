#include "dch/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace dch {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  std::vector<double> real(n);
  std::vector<Complex> spec(n / 2 + 1);
  const int ni = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  r2c_ = fftw_plan_dft_r2c_1d(ni, real.data(), reinterpret_cast<fftw_complex*>(spec.data()), flags);
  c2r_ = fftw_plan_dft_c2r_1d(ni, reinterpret_cast<fftw_complex*>(spec.data()), real.data(), flags);
  if (!r2c_ || !c2r_) throw Error("FFTW failed to create a plan");
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
  fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
}

std::shared_ptr<const FftPlan> FftPlan::get(std::size_t n) {
  std::lock_guard lock(planner_mutex());
  static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const FftPlan> plan(new FftPlan(n));
  cache.emplace(n, plan);
  return plan;
}

void FftPlan::forward(std::span<const double> in, std::span<Complex> out) const {
  // Out-of-place r2c leaves the input untouched.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void FftPlan::inverse(std::span<Complex> in, std::span<double> out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_), reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

std::vector<double> wavenumbers(const Grid& grid) {
  std::vector<double> k(grid.n_points / 2 + 1);
  const double base = std::numbers::pi / grid.half_width;
  for (std::size_t j = 0; j < k.size(); ++j) k[j] = base * static_cast<double>(j);
  return k;
}

std::size_t dealias_cutoff(std::size_t n) { return (n - 1) / 3; }

Spectrum to_spectrum(const Field& f) {
  const auto plan = FftPlan::get(f.size());
  Spectrum s(plan->spectrum_size());
  plan->forward(f.values(), s);
  return s;
}

Field from_spectrum(Spectrum s, const Grid& grid) {
  const auto plan = FftPlan::get(grid.n_points);
  Field f(grid);
  plan->inverse(s, f.values());
  const double scale = 1.0 / static_cast<double>(grid.n_points);
  for (double& x : f.values()) x *= scale;
  return f;
}

Field apply_symbol(const Field& f, const std::function<Complex(double, std::size_t)>& symbol) {
  Spectrum s = to_spectrum(f);
  const auto k = wavenumbers(f.grid());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] *= symbol(k[j], j);
  // A real field needs a real Nyquist coefficient.
  s.back() = Complex(s.back().real(), 0.0);
  return from_spectrum(std::move(s), f.grid());
}

Field spectral_derivative(const Field& f, int order) {
  if (order < 0) throw Error("derivative order must be non-negative");
  if (order == 0) return f;
  const std::size_t nyquist = f.size() / 2;
  return apply_symbol(f, [order, nyquist](double k, std::size_t j) {
    if (j == nyquist && order % 2 == 1) return Complex(0.0, 0.0);
    Complex ik(0.0, k);
    Complex m(1.0, 0.0);
    for (int p = 0; p < order; ++p) m *= ik;
    return m;
  });
}

void dealias(Spectrum& s, std::size_t n) {
  const std::size_t cutoff = dealias_cutoff(n);
  for (std::size_t j = cutoff + 1; j < s.size(); ++j) s[j] = Complex(0.0, 0.0);
}

void dealias(Field& f) {
  Spectrum s = to_spectrum(f);
  dealias(s, f.size());
  f = from_spectrum(std::move(s), f.grid());
}

Field upsample(const Field& f, std::size_t factor) {
  if (factor == 0 || !is_power_of_two(factor)) throw Error("upsampling factor must be a power of two");
  if (factor == 1) return f;
  const std::size_t n = f.size();
  const Grid fine{f.grid().half_width, n * factor, f.grid().spacing / static_cast<double>(factor)};
  Spectrum coarse = to_spectrum(f);
  Spectrum s(fine.n_points / 2 + 1, Complex(0.0, 0.0));
  std::copy(coarse.begin(), coarse.end(), s.begin());
  // The coarse Nyquist mode stands for cos(k x), which splits evenly between +k and -k.
  s[n / 2] *= 0.5;
  const double scale = static_cast<double>(factor);
  for (auto& c : s) c *= scale;
  return from_spectrum(std::move(s), fine);
}

double spectral_tail(const Field& f) {
  const Spectrum s = to_spectrum(f);
  double total = 0.0;
  double tail = 0.0;
  const std::size_t start = (2 * (s.size() - 1)) / 3;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double a = std::abs(s[j]);
    total = std::max(total, a);
    if (j >= start) tail = std::max(tail, a);
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace dch

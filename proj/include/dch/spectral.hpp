#ifndef DCH_SPECTRAL_HPP
#define DCH_SPECTRAL_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "dch/core.hpp"

namespace dch {

using Complex = std::complex<double>;
/// Half-complex spectrum of a real field: N/2 + 1 coefficients.
using Spectrum = std::vector<Complex>;

/// Real-to-complex transform pair for one size. Plans are created once per size,
/// shared, and executed through FFTW's new-array interface, which is thread safe.
class FftPlan {
 public:
  static std::shared_ptr<const FftPlan> get(std::size_t n);

  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<Complex> out) const;
  /// Unnormalized inverse; `in` is used as scratch and destroyed.
  void inverse(std::span<Complex> in, std::span<double> out) const;

 private:
  explicit FftPlan(std::size_t n);

  std::size_t n_;
  void* r2c_ = nullptr;
  void* c2r_ = nullptr;
};

/// Wavenumbers k_j = pi j / L for j = 0 .. N/2.
std::vector<double> wavenumbers(const Grid& grid);

/// Highest retained index under the 2/3 rule: modes with 3j >= N are dropped.
std::size_t dealias_cutoff(std::size_t n);

Spectrum to_spectrum(const Field& f);
/// Normalized inverse; consumes the spectrum.
Field from_spectrum(Spectrum s, const Grid& grid);

/// Fourier-collocation derivative. The Nyquist mode is dropped for odd orders.
Field spectral_derivative(const Field& f, int order);

/// Multiplies the spectrum by symbol(k, j) and transforms back. The symbol must be
/// Hermitian (real-valued output); the Nyquist coefficient is kept real.
Field apply_symbol(const Field& f, const std::function<Complex(double k, std::size_t j)>& symbol);

/// Zeroes every mode above the 2/3 cutoff, in place.
void dealias(Field& f);
void dealias(Spectrum& s, std::size_t n);

/// Trigonometric interpolant of f sampled on a grid `factor` times finer.
Field upsample(const Field& f, std::size_t factor);

/// Largest spectral amplitude in the top third of the resolved band, relative to
/// the largest amplitude overall. Smooth fields sit at roundoff.
double spectral_tail(const Field& f);

}  // namespace dch

#endif

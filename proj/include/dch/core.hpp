#ifndef DCH_CORE_HPP
#define DCH_CORE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a field or a stage of the integrator turns non-finite.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Uniform periodic grid on [-L, L) with N nodes x_j = -L + j*h.
struct Grid {
  double half_width = 0.0;
  std::size_t n_points = 0;
  double spacing = 0.0;

  double node(std::size_t j) const { return -half_width + static_cast<double>(j) * spacing; }
  double length() const { return 2.0 * half_width; }

  bool operator==(const Grid&) const = default;
};

/// Throws dch::Error unless L > 0 and N is a power of two >= 16.
Grid build_grid(double half_width, std::size_t n_points);

bool is_power_of_two(std::size_t n);

/// Real grid function; the nodal representation of v, n, w, V and friends.
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& grid, double fill = 0.0);
  Field(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t j) { return values_[j]; }
  double operator[](std::size_t j) const { return values_[j]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  bool all_finite() const;
  /// Throws NumericalError naming `what` if any entry is NaN or infinite.
  void require_finite(const char* what) const;

  double max_abs() const;
  double min() const;
  double max() const;
  std::size_t argmin() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

 private:
  Grid grid_{};
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Largest absolute pointwise difference between two fields on the same grid.
double sup_distance(const Field& a, const Field& b);

/// Samples `fn` at every grid node.
template <class Fn>
Field sample(const Grid& grid, Fn&& fn) {
  Field f(grid);
  for (std::size_t j = 0; j < grid.n_points; ++j) f[j] = fn(grid.node(j));
  return f;
}

/// Displacement x - center wrapped into [-L, L).
double periodic_displacement(const Grid& grid, double x, double center);

struct SimParams {
  double d = 1.0;
  Grid grid{};
  double cfl = 0.3;
  double t_end = 10.0;
  /// Unset means cfl / |breaking_slope_threshold|, resolved once v0 is known.
  std::optional<double> dt_min;
  double dt_max = 0.05;
  /// Unset means -1e3 * (1 + |min v0_x|).
  std::optional<double> breaking_slope_threshold;
  double sign_tol = 1e-9;
  bool dealias = true;

  void validate() const;
};

enum class Profile {
  gaussian,
  peakon,
  neg_x_gaussian,
  momentum_gaussian,
  momentum_odd,
  custom_samples,
};

std::string to_string(Profile p);
Profile profile_from_string(const std::string& name);

struct InitialDataSpec {
  Profile profile = Profile::gaussian;
  double amplitude = 1.0;
  double center = 0.0;
  double width = 1.0;
  int sign = 1;
  /// Nodal values of v0 for Profile::custom_samples.
  std::vector<double> samples;

  void validate() const;
  /// True for profiles that prescribe n0 rather than v0.
  bool is_momentum_profile() const;
};

/// v0 on the grid. Momentum profiles define n0 and return its Helmholtz inverse.
/// Profiles are evaluated at the minimum-image displacement from the center, so
/// shifting the center by one cell is an exact cyclic rotation.
Field sample_initial_data(const InitialDataSpec& spec, const Grid& grid, double d);

/// Momentum n0 prescribed by a momentum profile, before inversion.
Field sample_momentum_profile(const InitialDataSpec& spec, const Grid& grid);

/// Throws dch::Error when |f| at the two end nodes exceeds rel_tol * max|f|.
void require_boundary_decay(const Field& f, double rel_tol, const std::string& what);

}  // namespace dch

#endif

#include "dch/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dch/helmholtz.hpp"

namespace dch {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Grid build_grid(double half_width, std::size_t n_points) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw Error("grid half-width must be positive and finite");
  }
  if (!is_power_of_two(n_points) || n_points < 16) {
    std::ostringstream msg;
    msg << "grid size " << n_points << " is not a power of two >= 16";
    throw Error(msg.str());
  }
  return Grid{half_width, n_points, 2.0 * half_width / static_cast<double>(n_points)};
}

Field::Field(const Grid& grid, double fill) : grid_(grid), values_(grid.n_points, fill) {}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.n_points) throw Error("field length does not match grid size");
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

void Field::require_finite(const char* what) const {
  if (!all_finite()) throw NumericalError(std::string("non-finite values in ") + what);
}

double Field::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

std::size_t Field::argmin() const {
  return static_cast<std::size_t>(std::min_element(values_.begin(), values_.end()) - values_.begin());
}

Field& Field::operator+=(const Field& other) {
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& x : values_) x *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

double sup_distance(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

double periodic_displacement(const Grid& grid, double x, double center) {
  double delta = x - center;
  const double period = grid.length();
  while (delta < -grid.half_width) delta += period;
  while (delta >= grid.half_width) delta -= period;
  return delta;
}

void SimParams::validate() const {
  if (!(d >= 1.0) || !std::isfinite(d)) throw Error("d must be >= 1");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw Error("cfl must lie in (0, 1]");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error("t_end must be >= 0");
  if (dt_min && !(*dt_min > 0.0)) throw Error("dt_min must be positive");
  if (!(dt_max > 0.0)) throw Error("dt_max must be positive");
  if (dt_min && !(*dt_min < dt_max)) throw Error("dt_min must be below dt_max");
  if (breaking_slope_threshold && !(*breaking_slope_threshold < 0.0)) {
    throw Error("breaking_slope_threshold must be negative");
  }
  if (!(sign_tol > 0.0 && sign_tol < 1.0)) throw Error("sign_tol must lie in (0, 1)");
  build_grid(grid.half_width, grid.n_points);
}

namespace {

constexpr struct {
  Profile profile;
  const char* name;
} kProfileNames[] = {
    {Profile::gaussian, "gaussian"},
    {Profile::peakon, "peakon"},
    {Profile::neg_x_gaussian, "neg_x_gaussian"},
    {Profile::momentum_gaussian, "momentum_gaussian"},
    {Profile::momentum_odd, "momentum_odd"},
    {Profile::custom_samples, "custom_samples"},
};

}  // namespace

std::string to_string(Profile p) {
  for (const auto& entry : kProfileNames) {
    if (entry.profile == p) return entry.name;
  }
  return "unknown";
}

Profile profile_from_string(const std::string& name) {
  for (const auto& entry : kProfileNames) {
    if (name == entry.name) return entry.profile;
  }
  throw Error("unknown initial-data profile '" + name + "'");
}

void InitialDataSpec::validate() const {
  if (!(width > 0.0)) throw Error("profile width must be positive");
  if (sign != 1 && sign != -1) throw Error("profile sign must be +1 or -1");
  if (!std::isfinite(amplitude) || !std::isfinite(center)) throw Error("profile parameters must be finite");
}

bool InitialDataSpec::is_momentum_profile() const {
  return profile == Profile::momentum_gaussian || profile == Profile::momentum_odd;
}

void require_boundary_decay(const Field& f, double rel_tol, const std::string& what) {
  const double scale = f.max_abs();
  if (scale == 0.0) return;
  const double edge = std::max(std::abs(f[0]), std::abs(f[f.size() - 1]));
  if (edge > rel_tol * scale) {
    std::ostringstream msg;
    msg << what << " does not decay at the box boundary: |f(+-L)|/max|f| = " << edge / scale
        << " exceeds " << rel_tol << "; enlarge the half-width or narrow the profile";
    throw Error(msg.str());
  }
}

namespace {

constexpr double kDecayTol = 1e-12;

double signed_amplitude(const InitialDataSpec& spec) { return spec.sign * spec.amplitude; }

}  // namespace

Field sample_momentum_profile(const InitialDataSpec& spec, const Grid& grid) {
  spec.validate();
  const double a = signed_amplitude(spec);
  switch (spec.profile) {
    case Profile::momentum_gaussian:
      return sample(grid, [&](double x) {
        const double s = periodic_displacement(grid, x, spec.center) / spec.width;
        return a * std::exp(-s * s);
      });
    case Profile::momentum_odd:
      return sample(grid, [&](double x) {
        const double s = periodic_displacement(grid, x, spec.center) / spec.width;
        return a * s * std::exp(-s * s);
      });
    default:
      throw Error("profile '" + to_string(spec.profile) + "' does not prescribe a momentum");
  }
}

Field sample_initial_data(const InitialDataSpec& spec, const Grid& grid, double d) {
  spec.validate();
  const double a = signed_amplitude(spec);
  Field v;
  switch (spec.profile) {
    case Profile::gaussian:
      v = sample(grid, [&](double x) {
        const double s = periodic_displacement(grid, x, spec.center) / spec.width;
        return a * std::exp(-s * s);
      });
      break;
    case Profile::peakon: {
      const double rate = 1.0 / std::sqrt(d);
      v = sample(grid, [&](double x) {
        return a * std::exp(-std::abs(periodic_displacement(grid, x, spec.center)) * rate);
      });
      break;
    }
    case Profile::neg_x_gaussian:
      v = sample(grid, [&](double x) {
        const double s = periodic_displacement(grid, x, spec.center) / spec.width;
        return -a * s * std::exp(-s * s);
      });
      break;
    case Profile::momentum_gaussian:
    case Profile::momentum_odd: {
      const Field n0 = sample_momentum_profile(spec, grid);
      require_boundary_decay(n0, kDecayTol, "momentum profile n0");
      v = HelmholtzOperator(d, grid).invert(n0);
      break;
    }
    case Profile::custom_samples:
      if (spec.samples.size() != grid.n_points) {
        throw Error("custom_samples needs exactly one value per grid node");
      }
      v = Field(grid, spec.samples);
      break;
  }
  v.require_finite("initial data");
  require_boundary_decay(v, kDecayTol, "initial profile v0");
  return v;
}

}  // namespace dch

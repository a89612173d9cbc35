#include "dch/state.hpp"

#include "dch/helmholtz.hpp"
#include "dch/spectral.hpp"

namespace dch {

SimState::SimState(Field v, double d, double t0) : t(t0), d_(d), v_(std::move(v)) {
  if (!(d >= 1.0)) throw Error("d must be >= 1");
}

void SimState::set_v(Field v) {
  v_ = std::move(v);
  vx_.reset();
  n_.reset();
}

const Field& SimState::vx() const {
  if (!vx_) vx_ = spectral_derivative(v_, 1);
  return *vx_;
}

const Field& SimState::n() const {
  if (!n_) n_ = HelmholtzOperator(d_, v_.grid()).apply(v_);
  return *n_;
}

}  // namespace dch

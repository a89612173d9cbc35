#ifndef DCH_STATE_HPP
#define DCH_STATE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "dch/core.hpp"

namespace dch {

struct SlopeSample {
  double t = 0.0;
  double min_vx = 0.0;
};

/// Time, velocity field and lazily derived v_x and n = v - d v_xx.
/// The caches are dropped whenever v changes, so they are never stale.
class SimState {
 public:
  SimState(Field v, double d, double t = 0.0);

  double d() const { return d_; }
  const Grid& grid() const { return v_.grid(); }

  const Field& v() const { return v_; }
  void set_v(Field v);

  const Field& vx() const;
  const Field& n() const;

  double t = 0.0;
  double last_dt = 0.0;
  std::size_t step_count = 0;
  /// (t, min v_x) after every accepted step; strictly increasing in t.
  std::vector<SlopeSample> min_vx_history;

 private:
  double d_;
  Field v_;
  mutable std::optional<Field> vx_;
  mutable std::optional<Field> n_;
};

}  // namespace dch

#endif

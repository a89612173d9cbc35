#include "dch/eplift.hpp"

#include <algorithm>
#include <cmath>

#include "dch/helmholtz.hpp"

namespace dch {

void LiftedFields::scale_velocity(int component, double factor) {
  if (component < 0 || component >= dim) throw Error("component out of range");
  for (double& x : u[static_cast<std::size_t>(component)]) x *= factor;
}

LiftedFields lift_field(const Field& v, int dim, const EpGridSpec& spec, double t) {
  if (dim < 1 || dim > 3) throw Error("lift dimension must be 1, 2 or 3");
  if (spec.points < 3) throw Error("lift grid needs at least 3 points per axis");
  if (!(spec.extent > 0.0)) throw Error("lift extent must be positive");
  if (static_cast<double>(dim) * spec.extent > v.grid().half_width) {
    throw Error("lift grid reaches past the 1D box: need dim * extent <= L");
  }
  LiftedFields out;
  out.dim = dim;
  out.t = t;
  out.grid = {dim, spec.points, spec.extent, 2.0 * spec.extent / static_cast<double>(spec.points)};
  const std::size_t total = out.grid.total();
  if (total > kMaxLiftPoints) throw Error("lift grid too large");

  const Field n = HelmholtzOperator(static_cast<double>(dim), v.grid()).apply(v);
  std::vector<double> u(total), m(total);
  kernels::omp::ridge_sample(v.values(), v.grid().half_width, out.grid, u);
  kernels::omp::ridge_sample(n.values(), v.grid().half_width, out.grid, m);
  out.u.assign(static_cast<std::size_t>(dim), u);
  out.m.assign(static_cast<std::size_t>(dim), m);
  return out;
}

double EpResidualReport::max() const {
  double r = 0.0;
  for (double x : max_norm) r = std::max(r, x);
  return r;
}

EpResidualReport ep_residual(std::span<const LiftedFields> lifts) {
  if (lifts.size() < 3) throw Error("EP residual needs at least three snapshots");
  const LiftedFields& first = lifts.front();
  const int dim = first.dim;
  const double dt = lifts[1].t - lifts[0].t;
  if (!(dt > 0.0)) throw Error("snapshot times must increase");
  for (std::size_t s = 1; s < lifts.size(); ++s) {
    const LiftedFields& l = lifts[s];
    if (l.dim != dim || l.grid.points != first.grid.points || l.grid.extent != first.grid.extent) {
      throw Error("snapshots lifted onto different grids");
    }
    if (std::abs((l.t - lifts[s - 1].t) - dt) > 1e-9 * dt) throw Error("snapshot spacing is not uniform");
  }

  EpResidualReport rep;
  rep.max_norm.assign(static_cast<std::size_t>(dim), 0.0);
  rep.l2_norm.assign(static_cast<std::size_t>(dim), 0.0);
  rep.spacing = first.grid.spacing;
  rep.dt = dt;
  const double cell = std::pow(first.grid.spacing, dim);
  std::vector<double> out(first.grid.total());

  for (std::size_t s = 1; s + 1 < lifts.size(); ++s) {
    const LiftedFields& mid = lifts[s];
    std::vector<const double*> u, m;
    for (int c = 0; c < dim; ++c) {
      u.push_back(mid.u[static_cast<std::size_t>(c)].data());
      m.push_back(mid.m[static_cast<std::size_t>(c)].data());
    }
    for (int c = 0; c < dim; ++c) {
      const auto ci = static_cast<std::size_t>(c);
      kernels::EpStencilInput in;
      in.grid = mid.grid;
      in.u = u;
      in.m = m;
      in.m_prev_i = lifts[s - 1].m[ci].data();
      in.m_next_i = lifts[s + 1].m[ci].data();
      in.dt = dt;
      in.component = c;
      kernels::omp::ep_residual(in, out);
      double sq = 0.0;
      for (double r : out) {
        rep.max_norm[ci] = std::max(rep.max_norm[ci], std::abs(r));
        sq += r * r;
      }
      rep.l2_norm[ci] = std::max(rep.l2_norm[ci], std::sqrt(cell * sq));
      for (std::size_t k = 0; k < out.size(); ++k) {
        rep.term_scale = std::max(rep.term_scale, std::abs(in.m_next_i[k] - in.m_prev_i[k]) / (2.0 * dt));
      }
    }
    ++rep.evaluations;
  }
  return rep;
}

EpResidualReport ep_residual(std::span<const TimedField> snapshots, int dim, const EpGridSpec& spec) {
  if (snapshots.size() < 3) throw Error("EP residual needs at least three snapshots");
  std::vector<LiftedFields> lifts;
  lifts.reserve(snapshots.size());
  for (const TimedField& s : snapshots) lifts.push_back(lift_field(s.v, dim, spec, s.t));
  return ep_residual(std::span<const LiftedFields>(lifts));
}

}  // namespace dch

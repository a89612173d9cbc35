#include "dch/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dch/io.hpp"
#include "dch/lagrangian.hpp"
#include "dch/spectral.hpp"

namespace dch {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kTimeseriesColumns = {
    "t",        "dt",       "energy",   "min_vx", "argmin_vx", "max_abs_v", "momentum_residual",
    "margin_F", "margin_G", "margin_P", "boundary_contamination"};

const std::vector<std::string> kRiccatiColumns = {"t", "q_x0", "g", "A", "B", "linear_bound_rhs"};

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Reads the members of one JSON object and rejects any it was not asked about.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw Error(path_ + " must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return as<T>(j_.at(key), key);
  }

  template <class T>
  std::optional<T> optional(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return as<T>(j_.at(key), key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) throw Error("unknown key '" + path_ + "." + item.key() + "'");
    }
  }

 private:
  template <class T>
  T as(const json& v, const std::string& key) const {
    const std::string where = path_ + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw Error(where + " must be a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw Error(where + " must be a string");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw Error(where + " must be an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.get<long long>() < 0) throw Error(where + " must be non-negative");
      }
    } else {
      if (!v.is_number()) throw Error(where + " must be a number");
    }
    return v.get<T>();
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class T>
std::vector<T> number_list(Section& s, const std::string& key, const std::string& path) {
  if (!s.has(key)) return {};
  const json& arr = s.raw(key);
  if (!arr.is_array()) throw Error(path + "." + key + " must be a list");
  std::vector<T> out;
  for (const json& v : arr) {
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() || v.get<long long>() <= 0) throw Error(path + "." + key + " needs positive integers");
    } else {
      if (!v.is_number()) throw Error(path + "." + key + " needs numbers");
    }
    out.push_back(v.get<T>());
  }
  return out;
}

int lift_dimension(double d) {
  const double r = std::round(d);
  if (r != d || r < 1.0 || r > 3.0) throw Error("the EP lift needs d in {1, 2, 3}");
  return static_cast<int>(r);
}

}  // namespace

std::size_t SweepConfig::cells() const {
  return std::max<std::size_t>(1, d.size()) * std::max<std::size_t>(1, amplitude.size()) *
         std::max<std::size_t>(1, N.size());
}

void ScenarioConfig::resolve() {
  sim.d = d;
  sim.grid = build_grid(half_width, n_points);
  sim.validate();
  initial.validate();
  if (initial.profile == Profile::custom_samples && initial.samples.size() != n_points) {
    throw Error("initial_data.samples needs one value per grid node");
  }
  if (output.directory.empty()) throw Error("output.directory must not be empty");
  if (!(output.every_time >= 0.0)) throw Error("output.every_time must be >= 0");
  if (particle_count == 1) throw Error("particles.count must be 0 or at least 2");
  if (ep_lift.enabled) {
    const int dim = lift_dimension(d);
    if (ep_lift.grid.points < 3) throw Error("ep_lift.points must be at least 3");
    if (!(ep_lift.grid.extent > 0.0)) throw Error("ep_lift.extent must be positive");
    if (static_cast<double>(dim) * ep_lift.grid.extent > half_width) throw Error("ep_lift grid reaches past the box");
    if (!(output.every_time > 0.0)) throw Error("ep_lift needs a uniform snapshot cadence (output.every_time > 0)");
  }
  if (sweep.cells() > kMaxSweepCells) throw Error("sweep has more than 10^4 cells");
  for (double x : sweep.d) {
    if (!(x >= 1.0)) throw Error("sweep.d values must be >= 1");
  }
  for (std::size_t n : sweep.N) build_grid(half_width, n);
}

ScenarioConfig parse_config(const json& j) {
  ScenarioConfig c;
  Section root(j, "config");
  c.name = root.get<std::string>("name", c.name);

  if (!root.has("simulation")) throw Error("config needs a 'simulation' section");
  {
    Section s(root.raw("simulation"), "simulation");
    c.d = s.get("d", c.d);
    c.half_width = s.get("L", c.half_width);
    c.n_points = s.get<std::size_t>("N", c.n_points);
    c.sim.cfl = s.get("cfl", c.sim.cfl);
    c.sim.t_end = s.get("t_end", c.sim.t_end);
    c.sim.dt_min = s.optional<double>("dt_min");
    c.sim.dt_max = s.get("dt_max", c.sim.dt_max);
    c.sim.breaking_slope_threshold = s.optional<double>("breaking_slope_threshold");
    c.sim.sign_tol = s.get("sign_tol", c.sim.sign_tol);
    c.sim.dealias = s.get("dealias", c.sim.dealias);
    s.finish();
  }
  if (!root.has("initial_data")) throw Error("config needs an 'initial_data' section");
  {
    Section s(root.raw("initial_data"), "initial_data");
    c.initial.profile = profile_from_string(s.get<std::string>("profile", to_string(c.initial.profile)));
    c.initial.amplitude = s.get("amplitude", c.initial.amplitude);
    c.initial.center = s.get("center", c.initial.center);
    c.initial.width = s.get("width", c.initial.width);
    c.initial.sign = s.get("sign", c.initial.sign);
    c.initial.samples = number_list<double>(s, "samples", "initial_data");
    s.finish();
  }
  if (root.has("output")) {
    Section s(root.raw("output"), "output");
    c.output.directory = s.get("directory", c.output.directory);
    c.output.every_steps = s.get("every_steps", c.output.every_steps);
    c.output.every_time = s.get("every_time", c.output.every_time);
    c.output.snapshots = s.get("snapshots", c.output.snapshots);
    s.finish();
  }
  if (root.has("diagnostics")) {
    Section s(root.raw("diagnostics"), "diagnostics");
    c.diagnostics.energy = s.get("energy", c.diagnostics.energy);
    c.diagnostics.min_vx = s.get("min_vx", c.diagnostics.min_vx);
    c.diagnostics.momentum_residual = s.get("momentum_residual", c.diagnostics.momentum_residual);
    c.diagnostics.margins = s.get("margins", c.diagnostics.margins);
    c.diagnostics.riccati = s.get("riccati", c.diagnostics.riccati);
    s.finish();
  }
  if (root.has("particles")) {
    Section s(root.raw("particles"), "particles");
    c.particle_count = s.get("count", c.particle_count);
    s.finish();
  }
  if (root.has("ep_lift")) {
    Section s(root.raw("ep_lift"), "ep_lift");
    c.ep_lift.enabled = s.get("enabled", c.ep_lift.enabled);
    c.ep_lift.grid.points = s.get("points", c.ep_lift.grid.points);
    c.ep_lift.grid.extent = s.get("extent", c.ep_lift.grid.extent);
    s.finish();
  }
  if (root.has("sweep")) {
    Section s(root.raw("sweep"), "sweep");
    c.sweep.d = number_list<double>(s, "d", "sweep");
    c.sweep.amplitude = number_list<double>(s, "amplitude", "sweep");
    c.sweep.N = number_list<std::size_t>(s, "N", "sweep");
    s.finish();
  }
  root.finish();
  c.resolve();
  return c;
}

ScenarioConfig load_config(const fs::path& path) { return parse_config(io::read_json(path)); }

json to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["simulation"] = {{"d", c.d},
                     {"L", c.half_width},
                     {"N", c.n_points},
                     {"cfl", c.sim.cfl},
                     {"t_end", c.sim.t_end},
                     {"dt_min", c.sim.dt_min ? json(*c.sim.dt_min) : json(nullptr)},
                     {"dt_max", c.sim.dt_max},
                     {"breaking_slope_threshold",
                      c.sim.breaking_slope_threshold ? json(*c.sim.breaking_slope_threshold) : json(nullptr)},
                     {"sign_tol", c.sim.sign_tol},
                     {"dealias", c.sim.dealias}};
  j["initial_data"] = {{"profile", to_string(c.initial.profile)},
                       {"amplitude", c.initial.amplitude},
                       {"center", c.initial.center},
                       {"width", c.initial.width},
                       {"sign", c.initial.sign}};
  if (!c.initial.samples.empty()) j["initial_data"]["samples"] = c.initial.samples;
  j["output"] = {{"directory", c.output.directory},
                 {"every_steps", c.output.every_steps},
                 {"every_time", c.output.every_time},
                 {"snapshots", c.output.snapshots}};
  j["diagnostics"] = {{"energy", c.diagnostics.energy},
                      {"min_vx", c.diagnostics.min_vx},
                      {"momentum_residual", c.diagnostics.momentum_residual},
                      {"margins", c.diagnostics.margins},
                      {"riccati", c.diagnostics.riccati}};
  j["particles"] = {{"count", c.particle_count}};
  j["ep_lift"] = {{"enabled", c.ep_lift.enabled}, {"points", c.ep_lift.grid.points}, {"extent", c.ep_lift.grid.extent}};
  j["sweep"] = {{"d", c.sweep.d}, {"amplitude", c.sweep.amplitude}, {"N", c.sweep.N}};
  return j;
}

json to_json(const Classification& c) {
  json j;
  j["verdict"] = to_string(c.verdict);
  j["x0"] = c.x0 ? json(*c.x0) : json(nullptr);
  j["slope_criterion"] = c.slope_criterion;
  j["slope_margin"] = c.slope_margin;
  j["slope_x0"] = c.slope_x0;
  j["momentum_min_ratio"] = c.momentum_min_ratio;
  j["momentum_scale"] = c.momentum_scale;
  j["regular"] = c.regular;
  j["spectral_tail"] = c.spectral_tail;
  j["T_bound"] = c.blowup_time_bound ? json(*c.blowup_time_bound) : json(nullptr);
  j["warnings"] = c.warnings;
  return j;
}

json to_json(const RunOutcome& o) {
  json j;
  j["outcome"] = outcome_name(o);
  if (const auto* c = std::get_if<Completed>(&o)) {
    j["t_end"] = c->t_end;
  } else if (const auto* wb = std::get_if<WaveBreaking>(&o)) {
    j["t_detect"] = wb->t_detect;
    j["x_detect"] = wb->x_detect;
    j["min_vx"] = wb->min_vx;
    j["last_dt"] = wb->last_dt;
    j["slope_threshold"] = wb->slope_threshold;
    j["dt_min"] = wb->dt_min;
    json t = json::array(), m = json::array();
    for (const SlopeSample& s : wb->certificate) {
      t.push_back(s.t);
      m.push_back(s.min_vx);
    }
    j["certificate"] = {{"t", t}, {"min_vx", m}};
  } else if (const auto* f = std::get_if<NumericalFailure>(&o)) {
    j["t"] = f->t;
    j["reason"] = f->reason;
  }
  return j;
}

json to_json(const EpResidualReport& r) {
  return {{"max_norm", r.max_norm}, {"l2_norm", r.l2_norm},   {"max", r.max()},
          {"term_scale", r.term_scale}, {"spacing", r.spacing}, {"dt", r.dt},
          {"evaluations", r.evaluations}};
}

int RunReport::exit_code() const {
  switch (outcome.index()) {
    case 0:
      return 0;
    case 1:
      return 2;
    default:
      return 3;
  }
}

RunReport run_scenario(const ScenarioConfig& config, RunOptions options) {
  ScenarioConfig cfg = config;
  cfg.resolve();
  const double d = cfg.d;
  const SimParams& params = cfg.sim;

  RunReport report;
  const Field v0 = sample_initial_data(cfg.initial, params.grid, d);
  report.classification = classify_initial_data(v0, params);
  report.control = StepControl::from_params(params, v0);
  report.energy0 = energy(v0, d);
  const double sup_bound = sup_norm_bound(v0, d).rigorous;

  SimState state(v0, d);
  std::optional<ParticleSet> particles;
  const std::optional<double> x0 = report.classification.x0;
  if (cfg.particle_count >= 2) particles = seed_particles(state.n(), state.vx(), cfg.particle_count, x0);
  const bool blowup = report.classification.verdict == Verdict::BlowupSlope ||
                      report.classification.verdict == Verdict::BlowupSignPattern;
  const bool track_riccati = cfg.diagnostics.riccati && particles && x0 && blowup;

  const fs::path dir = cfg.output.directory;
  std::optional<io::CsvWriter> series_csv;
  if (options.write_files) {
    fs::create_directories(dir);
    io::write_json(dir / "config.json", to_json(cfg));
    io::write_json(dir / "classification.json", to_json(report.classification));
    series_csv.emplace(dir / "timeseries.csv", kTimeseriesColumns);
  }

  std::size_t snapshot_index = 0;
  Observer observer = [&](const SimState& s, const ParticleSet* p) {
    TimeseriesRow row{};
    row.t = s.t;
    row.dt = s.last_dt;
    row.energy = kNaN;
    row.min_vx = row.argmin_vx = kNaN;
    row.momentum_residual = kNaN;
    row.margin_F = row.margin_G = row.margin_P = kNaN;
    row.max_abs_v = s.v().max_abs();
    row.boundary_contamination = boundary_contamination(s);
    report.max_contamination = std::max(report.max_contamination, row.boundary_contamination);
    report.max_sup_excess = std::max(report.max_sup_excess, row.max_abs_v - sup_bound);
    if (cfg.diagnostics.energy) {
      row.energy = energy(s.v(), d);
      report.max_energy_drift = std::max(report.max_energy_drift, std::abs(row.energy - report.energy0) / report.energy0);
    }
    if (cfg.diagnostics.min_vx) {
      const std::size_t j = s.vx().argmin();
      row.min_vx = s.vx()[j];
      row.argmin_vx = s.grid().node(j);
    }
    if (cfg.diagnostics.momentum_residual && p) {
      row.momentum_residual = momentum_invariant_residual(s, *p);
      report.max_momentum_residual = std::max(report.max_momentum_residual, row.momentum_residual);
    }
    if (cfg.diagnostics.margins) {
      const ConvolutionMargins m = convolution_inequality_margin(s);
      row.margin_F = m.F;
      row.margin_G = m.G;
      row.margin_P = m.P;
      if (m.scale > 0.0) {
        report.worst_margin_ratio = std::min(report.worst_margin_ratio, std::min({m.F, m.G, m.P}) / m.scale);
      }
    }
    if (track_riccati) report.riccati.record(s, *p, *x0);
    report.series.push_back(row);
    if (series_csv) {
      const double cells[] = {row.t,        row.dt,       row.energy,   row.min_vx, row.argmin_vx,
                              row.max_abs_v, row.momentum_residual, row.margin_F, row.margin_G,
                              row.margin_P, row.boundary_contamination};
      series_csv->row(cells);
    }
    if (options.write_files && cfg.output.snapshots) {
      io::write_snapshot(dir / io::snapshot_name(snapshot_index), s.v(), d, s.t);
    }
    ++snapshot_index;
    if (options.keep_snapshots || cfg.ep_lift.enabled) report.snapshots.push_back({s.t, s.v()});
  };

  const Observer observers[] = {observer};
  report.outcome = integrate(state, params, report.control, particles ? &*particles : nullptr, observers,
                             ObserverCadence{cfg.output.every_steps, cfg.output.every_time});
  if (particles) report.ordering_violations = particles->ordering_violations;

  if (cfg.ep_lift.enabled) {
    // Only snapshots on the uniform output cadence; the final state may fall off it.
    std::vector<TimedField> uniform;
    for (const TimedField& s : report.snapshots) {
      const double k = s.t / cfg.output.every_time;
      if (std::abs(k - std::round(k)) < 1e-9) uniform.push_back(s);
    }
    if (uniform.size() >= 3) report.ep = ep_residual(uniform, lift_dimension(d), cfg.ep_lift.grid);
    if (!options.keep_snapshots) report.snapshots.clear();
  }

  if (options.write_files) {
    series_csv->flush();
    json out = to_json(report.outcome);
    out["exit_code"] = report.exit_code();
    out["step_control"] = {{"cfl", report.control.cfl},
                           {"dt_min", report.control.dt_min},
                           {"dt_max", report.control.dt_max},
                           {"breaking_slope_threshold", report.control.breaking_slope_threshold}};
    out["steps"] = state.step_count;
    out["energy0"] = report.energy0;
    out["max_energy_drift"] = report.max_energy_drift;
    out["worst_margin_ratio"] = report.worst_margin_ratio;
    out["max_momentum_residual"] = report.max_momentum_residual;
    out["max_boundary_contamination"] = report.max_contamination;
    out["contamination_flagged"] = report.max_contamination > kContaminationFlag;
    out["max_sup_excess"] = report.max_sup_excess;
    out["ordering_violations"] = report.ordering_violations;
    io::write_json(dir / "outcome.json", out);
    if (track_riccati && !report.riccati.samples.empty()) {
      io::CsvWriter csv(dir / "riccati.csv", kRiccatiColumns);
      for (const RiccatiSample& s : report.riccati.samples) {
        const double cells[] = {s.t, s.q, s.g, s.A, s.B, report.riccati.linear_bound(s.t, d)};
        csv.row(cells);
      }
    }
    if (report.ep) io::write_json(dir / "ep_residual.json", to_json(*report.ep));
  }
  return report;
}

std::vector<SweepCell> run_sweep(const ScenarioConfig& config) {
  ScenarioConfig base = config;
  base.resolve();
  std::vector<SweepCell> cells;
  if (base.sweep.empty()) {
    SweepCell c;
    c.d = base.d;
    c.amplitude = base.initial.amplitude;
    c.n_points = base.n_points;
    cells.push_back(c);
  } else {
    const auto ds = base.sweep.d.empty() ? std::vector<double>{base.d} : base.sweep.d;
    const auto as = base.sweep.amplitude.empty() ? std::vector<double>{base.initial.amplitude} : base.sweep.amplitude;
    const auto ns = base.sweep.N.empty() ? std::vector<std::size_t>{base.n_points} : base.sweep.N;
    for (double d : ds) {
      for (double a : as) {
        for (std::size_t n : ns) {
          SweepCell c;
          c.index = cells.size();
          c.d = d;
          c.amplitude = a;
          c.n_points = n;
          cells.push_back(c);
        }
      }
    }
  }

  const fs::path root = base.output.directory;
  fs::create_directories(root);
  const auto count = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    SweepCell& cell = cells[static_cast<std::size_t>(i)];
    try {
      ScenarioConfig c = base;
      c.sweep = {};
      c.d = cell.d;
      c.initial.amplitude = cell.amplitude;
      c.n_points = cell.n_points;
      c.output.directory = base.sweep.empty() ? root.string() : (root / ("cell_" + std::to_string(cell.index))).string();
      const RunReport r = run_scenario(c);
      cell.verdict = to_string(r.classification.verdict);
      cell.outcome = outcome_name(r.outcome);
      if (const auto* wb = std::get_if<WaveBreaking>(&r.outcome)) {
        cell.t_final = wb->t_detect;
      } else if (const auto* f = std::get_if<NumericalFailure>(&r.outcome)) {
        cell.t_final = f->t;
      } else {
        cell.t_final = std::get<Completed>(r.outcome).t_end;
      }
      cell.max_energy_drift = r.max_energy_drift;
      cell.worst_margin_ratio = r.worst_margin_ratio;
      cell.exit_code = r.exit_code();
    } catch (const std::exception& e) {
      cell.error = e.what();
      cell.exit_code = 1;
    }
  }

  io::CsvWriter summary(root / "summary.csv", {"index", "d", "amplitude", "N", "verdict", "outcome", "t_final",
                                               "max_energy_drift", "worst_margin_ratio", "exit_code", "error"});
  for (const SweepCell& c : cells) {
    std::string err = c.error;
    std::replace_if(err.begin(), err.end(), [](char ch) { return ch == ',' || ch == '\n' || ch == '"'; }, ';');
    const bool failed = !c.error.empty();
    summary.row({std::to_string(c.index), io::format_double(c.d), io::format_double(c.amplitude),
                 std::to_string(c.n_points), failed ? "failed" : c.verdict, failed ? "failed" : c.outcome,
                 failed ? "" : io::format_double(c.t_final), failed ? "" : io::format_double(c.max_energy_drift),
                 failed ? "" : io::format_double(c.worst_margin_ratio), std::to_string(c.exit_code), err});
  }
  return cells;
}

EpResidualReport verify_ep_directory(const fs::path& run_dir, int dim, const EpGridSpec& grid) {
  const auto files = io::list_snapshots(run_dir);
  if (files.size() < 3) throw Error("need at least three snapshots in " + run_dir.string());
  std::vector<TimedField> snaps;
  for (const auto& f : files) {
    const io::Snapshot s = io::read_snapshot(f);
    if (std::abs(s.d - dim) > 0.0) throw Error("snapshot d does not match the lift dimension");
    snaps.push_back({s.t, s.field()});
  }
  // Keep the longest uniform run from the start; a final off-cadence state is dropped.
  const double dt = snaps[1].t - snaps[0].t;
  std::size_t keep = 2;
  while (keep < snaps.size() && std::abs((snaps[keep].t - snaps[keep - 1].t) - dt) <= 1e-9 * dt) ++keep;
  snaps.resize(keep);
  return ep_residual(snaps, dim, grid);
}

std::string inspect_file(const fs::path& path) {
  std::ostringstream out;
  const std::string ext = path.extension().string();
  if (ext == ".bin") {
    const io::Snapshot s = io::read_snapshot(path);
    const Field v = s.field();
    out << "snapshot " << path.filename().string() << "\n"
        << "  N " << v.size() << "  L " << io::format_double(s.half_width) << "  d " << io::format_double(s.d)
        << "  t " << io::format_double(s.t) << "\n"
        << "  min " << io::format_double(v.min()) << "  max " << io::format_double(v.max()) << "  energy "
        << io::format_double(energy(v, s.d)) << "\n";
  } else if (ext == ".csv") {
    const io::CsvTable t = io::read_csv(path);
    out << "csv " << path.filename().string() << ": " << t.rows.size() << " rows\n";
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      out << "  " << t.header[c];
      if (!t.rows.empty()) out << " = " << t.rows.back()[c];
      out << "\n";
    }
  } else if (ext == ".json") {
    out << io::read_json(path).dump(2) << "\n";
  } else {
    throw Error("don't know how to inspect " + path.string());
  }
  return out.str();
}

}  // namespace dch

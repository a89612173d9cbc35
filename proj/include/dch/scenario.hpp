#ifndef DCH_SCENARIO_HPP
#define DCH_SCENARIO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dch/analysis.hpp"
#include "dch/core.hpp"
#include "dch/eplift.hpp"
#include "dch/timestepper.hpp"

namespace dch {

struct OutputConfig {
  std::string directory = "out";
  std::size_t every_steps = 0;
  double every_time = 0.5;
  bool snapshots = true;
};

struct DiagnosticsConfig {
  bool energy = true;
  bool min_vx = true;
  bool momentum_residual = true;
  bool margins = true;
  bool riccati = true;
};

struct EpLiftConfig {
  bool enabled = false;
  EpGridSpec grid{32, 1.0};
};

/// Lists of values; an empty list keeps the base value.
struct SweepConfig {
  std::vector<double> d;
  std::vector<double> amplitude;
  std::vector<std::size_t> N;

  bool empty() const { return d.empty() && amplitude.empty() && N.empty(); }
  std::size_t cells() const;
};

inline constexpr std::size_t kMaxSweepCells = 10000;

struct ScenarioConfig {
  std::string name = "scenario";
  double d = 1.0;
  double half_width = 20.0;
  std::size_t n_points = 2048;
  SimParams sim;  // grid and d filled from the fields above by resolve()
  InitialDataSpec initial;
  OutputConfig output;
  DiagnosticsConfig diagnostics;
  std::size_t particle_count = 64;
  EpLiftConfig ep_lift;
  SweepConfig sweep;

  /// Rebuilds sim.grid and sim.d and validates everything.
  void resolve();
};

/// Parses and validates a config document. Unknown keys are errors.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioConfig& c);

nlohmann::json to_json(const Classification& c);
nlohmann::json to_json(const RunOutcome& o);
nlohmann::json to_json(const EpResidualReport& r);

struct TimeseriesRow {
  double t, dt, energy, min_vx, argmin_vx, max_abs_v, momentum_residual, margin_F, margin_G, margin_P,
      boundary_contamination;
};

extern const std::vector<std::string> kTimeseriesColumns;
extern const std::vector<std::string> kRiccatiColumns;

struct RunReport {
  Classification classification;
  StepControl control;
  RunOutcome outcome;
  std::vector<TimeseriesRow> series;
  RiccatiTrace riccati;
  std::vector<TimedField> snapshots;
  std::optional<EpResidualReport> ep;

  double energy0 = 0.0;
  double max_energy_drift = 0.0;     // relative
  double worst_margin_ratio = 0.0;   // min over states of min(F, G, P) / scale
  double max_momentum_residual = 0.0;
  double max_contamination = 0.0;
  double max_sup_excess = 0.0;       // max |v| - M_inf
  std::size_t ordering_violations = 0;

  int exit_code() const;
};

struct RunOptions {
  bool write_files = true;
  /// Keep every observed state in RunReport::snapshots.
  bool keep_snapshots = false;
};

/// Classifies, integrates and records one scenario. With write_files the output
/// directory receives timeseries.csv, snap_<i>.bin, classification.json,
/// outcome.json, config.json and, when available, riccati.csv and ep_residual.json.
RunReport run_scenario(const ScenarioConfig& config, RunOptions options = {});

struct SweepCell {
  std::size_t index = 0;
  double d = 0.0;
  double amplitude = 0.0;
  std::size_t n_points = 0;
  std::string verdict;
  std::string outcome;
  double t_final = 0.0;
  double max_energy_drift = 0.0;
  double worst_margin_ratio = 0.0;
  int exit_code = 1;
  std::string error;
};

/// Runs every cell of the sweep block into <directory>/cell_<i> on a worker pool
/// and writes <directory>/summary.csv. An empty block runs the base scenario.
std::vector<SweepCell> run_sweep(const ScenarioConfig& config);

/// EP residual over the snapshots of a run directory.
EpResidualReport verify_ep_directory(const std::filesystem::path& run_dir, int dim, const EpGridSpec& grid);

/// Human-readable summary of a file written by the runner.
std::string inspect_file(const std::filesystem::path& path);

}  // namespace dch

#endif

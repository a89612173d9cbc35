// dch: command-line front end for the d-CH lab.
//
//   dch run <config>         integrate one scenario
//   dch sweep <config>       run every cell of the sweep block
//   dch classify <config>    print the initial-data verdict
//   dch verify-ep <run-dir>  EP residual of a run's snapshots
//   dch inspect <file>       summarize any file the runner writes
//
// Exit codes: 0 completed, 2 wave breaking detected, 3 numerical failure,
// 1 usage or configuration error.

#include <cmath>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "dch/io.hpp"
#include "dch/scenario.hpp"

namespace {

int run(const std::string& path) {
  const dch::ScenarioConfig cfg = dch::load_config(path);
  const dch::RunReport r = dch::run_scenario(cfg);
  std::cout << dch::outcome_name(r.outcome) << " (" << dch::to_string(r.classification.verdict) << ")";
  if (const auto* wb = std::get_if<dch::WaveBreaking>(&r.outcome)) {
    std::cout << " t_detect=" << wb->t_detect;
    if (r.classification.blowup_time_bound) std::cout << " T_bound=" << *r.classification.blowup_time_bound;
  } else if (const auto* f = std::get_if<dch::NumericalFailure>(&r.outcome)) {
    std::cout << " at t=" << f->t << ": " << f->reason;
  }
  std::cout << "\n";
  if (r.max_contamination > dch::kContaminationFlag) {
    std::cerr << "warning: boundary contamination " << r.max_contamination << " exceeds "
              << dch::kContaminationFlag << "\n";
  }
  return r.exit_code();
}

int sweep(const std::string& path) {
  const dch::ScenarioConfig cfg = dch::load_config(path);
  const auto cells = dch::run_sweep(cfg);
  if (cfg.sweep.empty()) return cells.front().exit_code;
  std::size_t failed = 0;
  for (const auto& c : cells) failed += c.error.empty() ? 0 : 1;
  std::cout << cells.size() << " cells, " << failed << " failed; summary in "
            << (std::filesystem::path(cfg.output.directory) / "summary.csv").string() << "\n";
  return 0;
}

int classify(const std::string& path) {
  const dch::ScenarioConfig cfg = dch::load_config(path);
  const dch::Field v0 = dch::sample_initial_data(cfg.initial, cfg.sim.grid, cfg.d);
  std::cout << dch::to_json(dch::classify_initial_data(v0, cfg.sim)).dump(2) << "\n";
  return 0;
}

int verify_ep(const std::string& dir, int dim, std::size_t points, double extent) {
  if (dim == 0) {
    const auto files = dch::io::list_snapshots(dir);
    if (files.empty()) throw dch::Error("no snapshots in " + dir);
    dim = static_cast<int>(std::lround(dch::io::read_snapshot(files.front()).d));
  }
  const dch::EpResidualReport r = dch::verify_ep_directory(dir, dim, {points, extent});
  std::cout << dch::to_json(r).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the d-CH equation"};
  app.require_subcommand(1);

  std::string config_path, dir, file;
  int dim = 0;
  std::size_t points = 32;
  double extent = 1.0;

  auto* run_cmd = app.add_subcommand("run", "Integrate one scenario");
  run_cmd->add_option("config", config_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep_cmd->add_option("config", config_path, "Scenario JSON with a sweep block")->required()->check(CLI::ExistingFile);
  auto* classify_cmd = app.add_subcommand("classify", "Classify the initial data only");
  classify_cmd->add_option("config", config_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  auto* ep_cmd = app.add_subcommand("verify-ep", "EP residual of a run directory's snapshots");
  ep_cmd->add_option("run-dir", dir, "Run directory")->required()->check(CLI::ExistingDirectory);
  ep_cmd->add_option("--dim", dim, "Lift dimension (default: the run's d)");
  ep_cmd->add_option("--points", points, "Lift grid points per axis")->check(CLI::Range(3, 4096));
  ep_cmd->add_option("--extent", extent, "Lift grid half-extent")->check(CLI::PositiveNumber);
  auto* inspect_cmd = app.add_subcommand("inspect", "Summarize a file written by the runner");
  inspect_cmd->add_option("file", file, "CSV, JSON or snapshot file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*run_cmd) return run(config_path);
    if (*sweep_cmd) return sweep(config_path);
    if (*classify_cmd) return classify(config_path);
    if (*ep_cmd) return verify_ep(dir, dim, points, extent);
    if (*inspect_cmd) {
      std::cout << dch::inspect_file(file);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

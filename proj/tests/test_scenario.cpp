#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dch/io.hpp"
#include "dch/scenario.hpp"

using namespace dch;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dch_scenario_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(DCH_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json bundled(const std::string& name) { return io::read_json(fs::path(DCH_SCENARIO_DIR) / (name + ".json")); }

// Writes cfg with its output redirected into dir/out and returns the config path.
fs::path stage(json cfg, const fs::path& dir) {
  cfg["output"]["directory"] = (dir / "out").string();
  io::write_json(dir / "config.json", cfg);
  return dir / "config.json";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json small_smooth() {
  return {{"simulation", {{"d", 1}, {"L", 32}, {"N", 512}, {"t_end", 1.0}}},
          {"initial_data", {{"profile", "momentum_gaussian"}, {"amplitude", 0.3}, {"width", 2.0}}},
          {"output", {{"every_time", 0.25}}},
          {"particles", {{"count", 16}}}};
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("defaults and round trip") {
    const ScenarioConfig c = parse_config(small_smooth());
    CHECK(c.d == 1.0);
    CHECK(c.n_points == 512);
    CHECK(c.sim.cfl == 0.3);
    CHECK_FALSE(c.sim.dt_min);
    CHECK(c.particle_count == 16);
    CHECK(c.sweep.empty());
    const ScenarioConfig back = parse_config(to_json(c));
    CHECK(to_json(back) == to_json(c));
  }
  SUBCASE("unknown keys") {
    json j = small_smooth();
    j["simulation"]["dt_mni"] = 1e-4;
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("simulation.dt_mni"), Error);
    j = small_smooth();
    j["extras"] = 1;
    CHECK_THROWS_AS(parse_config(j), Error);
  }
  SUBCASE("type and range errors") {
    json j = small_smooth();
    j["simulation"]["N"] = 1000;
    CHECK_THROWS_AS(parse_config(j), Error);
    j = small_smooth();
    j["simulation"]["N"] = "512";
    CHECK_THROWS_AS(parse_config(j), Error);
    j = small_smooth();
    j["initial_data"]["profile"] = "soliton";
    CHECK_THROWS_AS(parse_config(j), Error);
    j = small_smooth();
    j["ep_lift"] = {{"enabled", true}};  // d = 1 is fine, extent 1 <= L
    CHECK_NOTHROW(parse_config(j));
    j["simulation"]["d"] = 1.5;
    CHECK_THROWS_AS(parse_config(j), Error);
    j = small_smooth();
    j["sweep"] = {{"d", {1, 2}}, {"N", json::array({0})}};
    CHECK_THROWS_AS(parse_config(j), Error);
  }
  SUBCASE("every bundled scenario parses") {
    for (const auto& e : fs::directory_iterator(DCH_SCENARIO_DIR)) {
      CAPTURE(e.path().string());
      CHECK_NOTHROW(load_config(e.path()));
    }
  }
}

TEST_CASE("zero end time writes one row") {
  const fs::path dir = scratch("t0");
  json j = small_smooth();
  j["simulation"]["t_end"] = 0;
  CHECK(cli("run " + stage(j, dir).string()) == 0);
  const io::CsvTable t = io::read_csv(dir / "out" / "timeseries.csv");
  CHECK(t.header == kTimeseriesColumns);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.number(0, "t") == 0.0);
  CHECK(io::read_json(dir / "out" / "outcome.json")["outcome"] == "Completed");
}

TEST_CASE("malformed config creates nothing") {
  const fs::path dir = scratch("bad");
  json j = small_smooth();
  j["output"]["every_tiem"] = 0.1;
  const fs::path cfg = stage(j, dir);
  CHECK(cli("run " + cfg.string()) == 1);
  CHECK(cli("sweep " + cfg.string()) == 1);
  CHECK(cli("classify " + cfg.string()) == 1);
  CHECK_FALSE(fs::exists(dir / "out"));
  CHECK(cli("run " + (dir / "missing.json").string()) == 1);
  CHECK(cli("") == 1);
  CHECK(cli("frobnicate") == 1);
}

TEST_CASE("bundled blow-up scenario") {
  const fs::path dir = scratch("blowup");
  CHECK(cli("run " + stage(bundled("blowup_slope_d1"), dir).string()) == 2);
  const json outcome = io::read_json(dir / "out" / "outcome.json");
  const json cls = io::read_json(dir / "out" / "classification.json");
  CHECK(outcome["outcome"] == "WaveBreaking");
  CHECK(outcome["exit_code"] == 2);
  CHECK(cls["verdict"] == "BlowupSlope");
  CHECK(outcome["t_detect"].get<double>() <= cls["T_bound"].get<double>());
  const io::CsvTable r = io::read_csv(dir / "out" / "riccati.csv");
  CHECK(r.header == kRiccatiColumns);
  CHECK(r.rows.size() > 3);
}

TEST_CASE("reruns are byte-identical and every file is inspectable") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const json j = small_smooth();
  REQUIRE(cli("run " + stage(j, a).string()) == 0);
  REQUIRE(cli("run " + stage(j, b).string()) == 0);
  CHECK(slurp(a / "out" / "timeseries.csv") == slurp(b / "out" / "timeseries.csv"));
  CHECK(slurp(a / "out" / "snap_4.bin") == slurp(b / "out" / "snap_4.bin"));

  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a / "out")) {
    CAPTURE(e.path().string());
    CHECK(cli("inspect " + e.path().string()) == 0);
    CHECK_NOTHROW(inspect_file(e.path()));
    ++files;
  }
  CHECK(files == 4 + 5);  // config, classification, outcome, timeseries, five snapshots
  CHECK(cli("inspect " + (a / "config.json").string()) == 0);
  std::ofstream(a / "notes.txt") << "x";
  CHECK(cli("inspect " + (a / "notes.txt").string()) == 1);
}

TEST_CASE("timeseries content") {
  json j = small_smooth();
  j["diagnostics"] = {{"margins", false}};
  ScenarioConfig c = parse_config(j);
  const RunReport r = run_scenario(c, {false, true});
  CHECK(r.exit_code() == 0);
  REQUIRE(r.series.size() == 5);
  CHECK(r.snapshots.size() == 5);
  CHECK(std::isnan(r.series[2].margin_F));
  CHECK(r.series[4].t == 1.0);
  CHECK(r.max_energy_drift < 1e-8);
  CHECK(r.max_momentum_residual < 1e-3);
  CHECK(r.max_contamination < kContaminationFlag);
}

TEST_CASE("sweeps") {
  SUBCASE("empty block behaves as a single run") {
    const fs::path dir = scratch("sweep_empty");
    CHECK(cli("sweep " + stage(small_smooth(), dir).string()) == 0);
    CHECK(fs::exists(dir / "out" / "timeseries.csv"));
    CHECK(fs::exists(dir / "out" / "summary.csv"));
  }
  SUBCASE("resolution sweep on smooth data") {
    const fs::path dir = scratch("sweep_n");
    json j = small_smooth();
    j["simulation"]["t_end"] = 2.0;
    j["output"]["snapshots"] = false;
    j["sweep"] = {{"N", {256, 512, 1024}}};
    CHECK(cli("sweep " + stage(j, dir).string()) == 0);
    const io::CsvTable t = io::read_csv(dir / "out" / "summary.csv");
    REQUIRE(t.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(t.rows[i][t.column("outcome")] == "Completed");
      CHECK(fs::exists(dir / "out" / ("cell_" + std::to_string(i)) / "timeseries.csv"));
    }
    // spatially converged already; what is left is the time-stepping error
    for (std::size_t i = 0; i < 3; ++i) CHECK(t.number(i, "max_energy_drift") < 1e-8);
  }
  SUBCASE("failed cells are marked") {
    const fs::path dir = scratch("sweep_fail");
    json j = small_smooth();
    j["simulation"]["t_end"] = 0.0;
    j["sweep"] = {{"d", {1, 400}}};  // the kernel tail at d = 400 reaches the box ends
    CHECK(cli("sweep " + stage(j, dir).string()) == 0);
    const io::CsvTable t = io::read_csv(dir / "out" / "summary.csv");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][t.column("outcome")] == "Completed");
    CHECK(t.rows[1][t.column("outcome")] == "failed");
    CHECK(t.number(1, "exit_code") == 1.0);
    CHECK_FALSE(t.rows[1][t.column("error")].empty());
  }
}

TEST_CASE("EP verification of a run directory") {
  const fs::path dir = scratch("ep");
  json j = bundled("ep_smooth_d2");
  j["simulation"]["t_end"] = 0.3;
  REQUIRE(cli("run " + stage(j, dir).string()) == 0);
  const json rep = io::read_json(dir / "out" / "ep_residual.json");
  CHECK(rep["evaluations"].get<int>() == 5);
  const EpResidualReport again = verify_ep_directory(dir / "out", 2, {32, 2.0});
  CHECK(again.max() == rep["max"].get<double>());
  CHECK(cli("verify-ep " + (dir / "out").string() + " --points 32 --extent 2") == 0);
  CHECK(cli("verify-ep " + (dir / "out").string() + " --dim 3") == 1);
  CHECK(cli("verify-ep " + (dir / "nowhere").string()) == 1);
}

TEST_CASE("classify subcommand") {
  const fs::path dir = scratch("classify");
  CHECK(cli("classify " + stage(bundled("sign_pattern_d1"), dir).string()) == 0);
  CHECK_FALSE(fs::exists(dir / "out"));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "dch/io.hpp"

using namespace dch;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dch_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("shortest round-trip formatting") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(-2.0) == "-2");
  CHECK(io::format_double(1e-300) == "1e-300");
  CHECK(io::format_double(std::nan("")).empty());
  CHECK(std::isnan(io::parse_double("")));
  CHECK(io::parse_double(io::format_double(INFINITY)) == INFINITY);
  CHECK_THROWS_AS(io::parse_double("1.5x"), Error);

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 10000; ++i) {
    double x;
    const std::uint64_t b = bits(rng);
    std::memcpy(&x, &b, sizeof x);
    if (!std::isfinite(x)) continue;
    const double y = io::parse_double(io::format_double(x));
    CHECK(std::memcmp(&x, &y, sizeof x) == 0);
  }
  const double tiny = std::numeric_limits<double>::denorm_min();
  CHECK(io::parse_double(io::format_double(tiny)) == tiny);
}

TEST_CASE("csv round trip") {
  const fs::path dir = scratch("csv");
  {
    io::CsvWriter w(dir / "a.csv", {"t", "x", "label"});
    w.row({"0", "1.5", "a"});
    const double cells[] = {0.25, std::nan(""), 3.0};
    w.row(cells);
    CHECK_THROWS_AS(w.row({"1", "2"}), Error);
    CHECK_THROWS_AS(w.row({"1", "2", "a,b"}), Error);
  }
  const io::CsvTable t = io::read_csv(dir / "a.csv");
  CHECK(t.header == std::vector<std::string>{"t", "x", "label"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.number(0, "x") == 1.5);
  CHECK(std::isnan(t.number(1, "x")));
  CHECK(t.number(1, "t") == 0.25);
  CHECK_THROWS_AS(t.column("y"), Error);
  CHECK_THROWS_AS(io::read_csv(dir / "missing.csv"), Error);
}

TEST_CASE("snapshot format") {
  const fs::path dir = scratch("snap");
  const Grid g = build_grid(12.5, 16);
  const Field v = sample(g, [](double x) { return std::sin(x) / 3; });
  io::write_snapshot(dir / io::snapshot_name(0), v, 2.0, 0.75);

  SUBCASE("layout") {
    std::ifstream in(dir / "snap_0.bin", std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(bytes.size() == 8 + 4 + 8 + 3 * 8 + 16 * 8);
    CHECK(std::string(bytes.data(), 8) == "DCHSNAP1");
    CHECK(bytes[8] == 1);
    CHECK(bytes[12] == 16);
    double L;
    std::memcpy(&L, bytes.data() + 20, 8);
    CHECK(L == 12.5);
  }
  SUBCASE("round trip") {
    const io::Snapshot s = io::read_snapshot(dir / "snap_0.bin");
    CHECK(s.half_width == 12.5);
    CHECK(s.d == 2.0);
    CHECK(s.t == 0.75);
    const Field back = s.field();
    CHECK(back.grid() == g);
    CHECK(sup_distance(back, v) == 0.0);
  }
  SUBCASE("corruption is detected") {
    fs::copy_file(dir / "snap_0.bin", dir / "long.bin");
    std::ofstream(dir / "long.bin", std::ios::app | std::ios::binary) << 'x';
    CHECK_THROWS_AS(io::read_snapshot(dir / "long.bin"), Error);
    fs::copy_file(dir / "snap_0.bin", dir / "short.bin");
    fs::resize_file(dir / "short.bin", 100);
    CHECK_THROWS_AS(io::read_snapshot(dir / "short.bin"), Error);
    std::ofstream(dir / "bad.bin", std::ios::binary) << "NOTASNAPSHOTFILE....";
    CHECK_THROWS_AS(io::read_snapshot(dir / "bad.bin"), Error);
  }
}

TEST_CASE("snapshots are listed in index order") {
  const fs::path dir = scratch("list");
  const Field v(build_grid(1.0, 16));
  for (std::size_t i : {10u, 2u, 0u, 1u}) io::write_snapshot(dir / io::snapshot_name(i), v, 1.0, static_cast<double>(i));
  std::ofstream(dir / "snap_x.bin") << "";
  std::ofstream(dir / "other.bin") << "";
  const auto files = io::list_snapshots(dir);
  REQUIRE(files.size() == 4);
  CHECK(files[0].filename() == "snap_0.bin");
  CHECK(files[1].filename() == "snap_1.bin");
  CHECK(files[2].filename() == "snap_2.bin");
  CHECK(files[3].filename() == "snap_10.bin");
}

TEST_CASE("json files") {
  const fs::path dir = scratch("json");
  const nlohmann::json j = {{"a", 1.5}, {"b", {1, 2, 3}}};
  io::write_json(dir / "x.json", j);
  CHECK(io::read_json(dir / "x.json") == j);
  std::ofstream(dir / "bad.json") << "{ nope";
  CHECK_THROWS_AS(io::read_json(dir / "bad.json"), Error);
}

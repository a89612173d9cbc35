#include "dch/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace dch::io {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

std::string format_double(double x) {
  if (std::isnan(x)) return {};
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error("not a number: '" + std::string(s) + "'");
  }
  return x;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw Error("cannot open " + path.string() + " for writing");
  row(header);
}

void CsvWriter::row(std::span<const double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double x : values) cells.push_back(format_double(x));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error("CSV row has the wrong number of cells");
  for (const std::string& c : cells) {
    if (c.find_first_of(",\n\"") != std::string::npos) throw Error("CSV cell needs quoting: " + c);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw Error("CSV write failed");
}

void CsvWriter::flush() { out_.flush(); }

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error("CSV has no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, std::string_view name) const {
  return parse_double(rows.at(row).at(column(name)));
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + " is empty");
  t.header = split(line);
  while (std::getline(in, line)) {
    auto cells = split(line);
    if (cells.size() != t.header.size()) throw Error(path.string() + ": ragged row");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

Field Snapshot::field() const { return Field(build_grid(half_width, values.size()), values); }

namespace {

template <class T>
void put(std::ofstream& out, T x) {
  out.write(reinterpret_cast<const char*>(&x), sizeof x);
}

template <class T>
T get(std::ifstream& in, const std::string& what) {
  T x{};
  if (!in.read(reinterpret_cast<char*>(&x), sizeof x)) throw Error("truncated snapshot: " + what);
  return x;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Field& v, double d, double t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(kSnapshotMagic, sizeof kSnapshotMagic);
  put(out, kSnapshotVersion);
  put(out, static_cast<std::uint64_t>(v.size()));
  put(out, v.grid().half_width);
  put(out, d);
  put(out, t);
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!out) throw Error("snapshot write failed: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kSnapshotMagic, sizeof magic) != 0) {
    throw Error(path.string() + " is not a snapshot file");
  }
  if (get<std::uint32_t>(in, "version") != kSnapshotVersion) throw Error("unsupported snapshot version");
  const auto n = get<std::uint64_t>(in, "size");
  if (n == 0 || n > (std::uint64_t{1} << 32)) throw Error("implausible snapshot size");
  Snapshot s;
  s.half_width = get<double>(in, "L");
  s.d = get<double>(in, "d");
  s.t = get<double>(in, "t");
  s.values.resize(n);
  if (!in.read(reinterpret_cast<char*>(s.values.data()), static_cast<std::streamsize>(n * sizeof(double)))) {
    throw Error("truncated snapshot: values");
  }
  if (in.peek() != std::char_traits<char>::eof()) throw Error("trailing bytes after snapshot");
  return s;
}

std::string snapshot_name(std::size_t index) { return "snap_" + std::to_string(index) + ".bin"; }

std::vector<std::filesystem::path> list_snapshots(const std::filesystem::path& dir) {
  std::vector<std::pair<std::size_t, std::filesystem::path>> found;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() < 10 || name.rfind("snap_", 0) != 0 || name.substr(name.size() - 4) != ".bin") continue;
    const std::string digits = name.substr(5, name.size() - 9);
    std::size_t index = 0;
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (res.ec != std::errc() || res.ptr != digits.data() + digits.size()) continue;
    found.emplace_back(index, entry.path());
  }
  std::sort(found.begin(), found.end());
  std::vector<std::filesystem::path> out;
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("JSON write failed: " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace dch::io

#ifndef DCH_IO_HPP
#define DCH_IO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dch/core.hpp"

namespace dch::io {

/// Shortest decimal string that parses back to exactly x. NaN is written empty.
std::string format_double(double x);
/// Inverse of format_double; an empty field reads as NaN.
double parse_double(std::string_view s);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(std::span<const double> values);
  void row(const std::vector<std::string>& cells);
  void flush();

 private:
  std::ofstream out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

inline constexpr char kSnapshotMagic[8] = {'D', 'C', 'H', 'S', 'N', 'A', 'P', '1'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  double half_width = 0.0;
  double d = 1.0;
  double t = 0.0;
  std::vector<double> values;

  Field field() const;
};

void write_snapshot(const std::filesystem::path& path, const Field& v, double d, double t);
Snapshot read_snapshot(const std::filesystem::path& path);
std::string snapshot_name(std::size_t index);
/// snap_<index>.bin files of a directory, in index order.
std::vector<std::filesystem::path> list_snapshots(const std::filesystem::path& dir);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace dch::io

#endif

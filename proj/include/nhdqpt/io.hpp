#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nhdqpt/dilation.hpp"
#include "nhdqpt/dynphase.hpp"
#include "nhdqpt/quench.hpp"
#include "nhdqpt/topology.hpp"

namespace nhdqpt {

/// Shortest decimal form that round-trips; "nan", "inf", "-inf" otherwise.
std::string format_double(double x);

/// In-memory CSV: header row, Unix newlines, doubles in shortest form.
class CsvTable {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<Cell> row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

std::string_view status_name(CellStatus status);
std::string_view range_name(BzRange range);

nlohmann::ordered_json to_json(const WindingResult& w);
nlohmann::ordered_json to_json(const CriticalSet& c);
nlohmann::ordered_json to_json(const CorrespondenceRow& r);
nlohmann::ordered_json to_json(const DqptReport& r);
nlohmann::ordered_json to_json(const SymmetryReport& r);
nlohmann::ordered_json to_json(const GaplessSet& g);
/// Model family and named parameters (profiles for generic models).
nlohmann::ordered_json to_json(const ChiralTwoBandModel& m);

}  // namespace nhdqpt

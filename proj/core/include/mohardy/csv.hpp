#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mohardy {

/// Shortest round-trip-safe text for a double: 17 significant digits.
std::string format_double(double value);

using CsvCell = std::variant<std::string, double, std::int64_t>;

/// Comma separated table with a header row. Fields containing a comma,
/// quote or newline are quoted.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(const std::vector<CsvCell>& cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::size_t columns_;
  std::ofstream out_;
};

/// One plot series: header "x,y" followed by the pairs.
void write_series(const std::filesystem::path& path, std::span<const double> x,
                  std::span<const double> y);

}  // namespace mohardy

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace compactfd {

/// One CSV cell. Empty cells mark undefined values (e.g. the rate of the
/// first convergence row).
using CsvCell = std::variant<std::monostate, std::int64_t, double, std::string>;

/// Shortest round-trip decimal with an explicit exponent, e.g. 1.29e-07.
std::string format_double(double value);

/// Rectangular table with a header row. Rendering is locale independent and
/// every row, including the last, ends with '\n'.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<CsvCell>>& rows() const { return rows_; }

  /// Throws std::invalid_argument when the row width differs from the header.
  void add_row(std::vector<CsvCell> row);

  std::string render() const;
  void write(const std::string& path) const;

  /// Integers become int64, other numbers double, anything else a string.
  static CsvTable parse(const std::string& text);
  static CsvTable read(const std::string& path);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

}  // namespace compactfd

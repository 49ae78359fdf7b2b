#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace quermass::csv {

/// Shortest representation that parses back to the same double, '.' decimal
/// separator, independent of the global locale.
std::string format(double v);
std::string format(long long v);

/// Writes one newline-terminated row of already formatted cells.
void write_row(std::ostream& os, std::span<const std::string> cells);
void write_row(std::ostream& os, std::span<const double> values);

/// Strict reader: every row must be newline-terminated and carry the header's
/// column count. numbers() additionally requires every cell of the column to
/// parse completely as a double.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
  std::vector<double> numbers(std::string_view name) const;
};
Table read_strict(std::istream& is);
Table read_strict_file(const std::string& path);

double parse_double(std::string_view text);

}  // namespace quermass::csv

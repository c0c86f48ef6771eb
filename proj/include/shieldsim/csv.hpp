#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shieldsim {

/// Numeric table written as a header row plus comma-separated rows.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
  std::size_t column(const std::string& name) const;
};

/// Shortest round-trip decimal form; "nan", "inf" and "-inf" for non-finite values.
std::string format_number(double v);

void write_csv(const Table& table, std::ostream& out);
void write_csv(const Table& table, const std::string& path);

}  // namespace shieldsim

#pragma once

// Comma-separated tables: header row, `%.10e` numbers, '\n' line endings.

#include <iosfwd>
#include <string>
#include <vector>

namespace msepred {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of `name`; throws DomainError when absent.
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;
  double at(std::size_t row, const std::string& name) const { return rows.at(row).at(column(name)); }
};

std::string format_csv(const Table& table);
void write_csv(std::ostream& out, const Table& table);
/// Throws DomainError on ragged rows or non-numeric cells.
Table parse_csv(std::istream& in);

}  // namespace msepred

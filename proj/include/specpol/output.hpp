#pragma once

// Tabular result documents and their CSV / JSON serializations. Numbers are
// written as fixed-point literals at a caller-chosen number of decimals so
// that identical inputs give byte-identical files.

#include <cstdint>
#include <deque>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace specpol {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool csv_header = true;

  void add(std::vector<Cell> row);
};

struct Document {
  std::deque<Table> tables;  // deque: references from add_table stay valid
  Table& add_table(std::string name, std::vector<std::string> columns, bool csv_header = true);
};

struct NumberFormat {
  int decimals = 8;
  bool truncate = false;  // cut toward zero instead of rounding to nearest
};

/// "%.<decimals>f" with negative zero (after rounding) printed as positive.
std::string format_fixed(double x, int decimals);
std::string format_fixed(double x, const NumberFormat& fmt);

/// One table: optional header line then one line per row. Several tables: each
/// block starts with "# <name>", blocks separated by an empty line.
void write_csv(std::ostream& os, const Document& doc, const NumberFormat& fmt);
/// Object keyed by table name; each table is an array of row objects.
void write_json(std::ostream& os, const Document& doc, const NumberFormat& fmt);

}  // namespace specpol

#include "specpol/output.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace specpol {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match table '" + name + "'");
  rows.push_back(std::move(row));
}

Table& Document::add_table(std::string name, std::vector<std::string> columns, bool csv_header) {
  tables.push_back(Table{std::move(name), std::move(columns), {}, csv_header});
  return tables.back();
}

std::string format_fixed(double x, int decimals) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string format_fixed(double x, const NumberFormat& fmt) {
  if (!fmt.truncate || !std::isfinite(x)) return format_fixed(x, fmt.decimals);
  // Four guard digits, then cut; a carry into the kept digits only happens
  // when all guard digits round up from 9999.
  std::string s = format_fixed(x, fmt.decimals + 4);
  s.resize(s.size() - 4);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

std::string cell_text(const Cell& c, const NumberFormat& fmt, bool json) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) {
    if (json && !std::isfinite(*d)) return "null";
    return format_fixed(*d, fmt);
  }
  const auto& s = std::get<std::string>(c);
  return json ? json_string(s) : csv_field(s);
}

}  // namespace

void write_csv(std::ostream& os, const Document& doc, const NumberFormat& fmt) {
  const bool blocks = doc.tables.size() > 1;
  bool first = true;
  for (const auto& t : doc.tables) {
    if (blocks) {
      if (!first) os << '\n';
      os << "# " << t.name << '\n';
    }
    first = false;
    if (t.csv_header) {
      for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << csv_field(t.columns[k]);
      os << '\n';
    }
    for (const auto& row : t.rows) {
      for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << cell_text(row[k], fmt, false);
      os << '\n';
    }
  }
}

void write_json(std::ostream& os, const Document& doc, const NumberFormat& fmt) {
  os << "{";
  for (std::size_t ti = 0; ti < doc.tables.size(); ++ti) {
    const auto& t = doc.tables[ti];
    os << (ti ? ",\n  " : "\n  ") << json_string(t.name) << ": [";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      os << (r ? ",\n    {" : "\n    {");
      for (std::size_t k = 0; k < t.columns.size(); ++k) {
        os << (k ? ", " : "") << json_string(t.columns[k]) << ": " << cell_text(t.rows[r][k], fmt, true);
      }
      os << "}";
    }
    os << (t.rows.empty() ? "]" : "\n  ]");
  }
  os << (doc.tables.empty() ? "}\n" : "\n}\n");
}

}  // namespace specpol

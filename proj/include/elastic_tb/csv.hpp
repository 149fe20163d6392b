#pragma once

// CSV datasets: first column is the grid, each further column one function.
// A header row is optional; when present its cells after the first become the
// function labels.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "elastic_tb/errors.hpp"
#include "elastic_tb/simulate.hpp"

namespace elastic_tb {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline DatasetTable read_csv(std::istream& in) {
  DatasetTable table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::vector<std::string_view> cells = detail::split_csv(line);
    std::vector<double> values(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size() && numeric; ++i) numeric = detail::parse_double(cells[i], values[i]);

    if (first_data && table.grid.empty() && table.labels.empty() && !numeric) {
      if (cells.size() < 2) throw ParseError("header needs a grid column and at least one function", line_no);
      width = cells.size();
      for (std::size_t i = 1; i < cells.size(); ++i) table.labels.emplace_back(cells[i]);
      continue;
    }
    if (width == 0) {
      width = cells.size();
      if (width < 2) throw ParseError("need a grid column and at least one function column", line_no);
      table.functions.assign(width - 1, {});
    } else if (table.functions.empty()) {
      table.functions.assign(width - 1, {});
    }
    if (cells.size() != width)
      throw ParseError("row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(width),
                       line_no);
    if (!numeric) {
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (!detail::parse_double(cells[i], values[i]))
          throw ParseError("non-numeric cell '" + std::string(cells[i]) + "' in column " + std::to_string(i + 1),
                           line_no);
    }
    for (double v : values)
      if (!std::isfinite(v)) throw ParseError("non-finite value", line_no);
    if (!table.grid.empty() && !(values[0] > table.grid.back()))
      throw ParseError("grid must be strictly increasing", line_no);
    first_data = false;
    table.grid.push_back(values[0]);
    for (std::size_t i = 1; i < width; ++i) table.functions[i - 1].push_back(values[i]);
  }
  if (table.grid.size() < 3) throw ParseError("need at least 3 grid rows", line_no);
  table.validate();
  return table;
}

inline DatasetTable read_csv_string(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

inline DatasetTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return read_csv(in);
}

/// Rows of the grid followed by every function, 17 significant digits.
inline std::string write_csv(const DatasetTable& table, bool header = true) {
  table.validate();
  std::string out;
  if (header) {
    out += "t";
    for (std::size_t i = 0; i < table.functions.size(); ++i)
      out += "," + (table.labels.empty() ? "f" + std::to_string(i + 1) : table.labels[i]);
    out += "\n";
  }
  for (std::size_t r = 0; r < table.grid.size(); ++r) {
    out += detail::format_double(table.grid[r]);
    for (const auto& f : table.functions) out += "," + detail::format_double(f[r]);
    out += "\n";
  }
  return out;
}

/// Generic numeric table: named columns of equal length.
inline std::string write_columns(const std::vector<std::string>& names, const std::vector<Vec>& columns) {
  if (names.size() != columns.size()) throw SizeError("write_columns: name count mismatch");
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  out += "\n";
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw SizeError("write_columns: ragged columns");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + detail::format_double(columns[i][r]);
    out += "\n";
  }
  return out;
}

}  // namespace elastic_tb

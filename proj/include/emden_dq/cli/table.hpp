#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace emden_dq::cli {

enum class OutputFormat { csv, markdown };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "markdown" || s == "md") return OutputFormat::markdown;
  throw std::invalid_argument("unknown output format: " + std::string(s));
}

inline std::string_view format_name(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "markdown"; }

/// One cell in both renderings: CSV round-trips, markdown is rounded for reading.
struct Cell {
  std::string csv;
  std::string markdown;
};

/// Run metadata plus a rectangular table, rendered as CSV or markdown.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_meta(std::string key, std::string value) { meta_.emplace_back(std::move(key), std::move(value)); }

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw std::logic_error("table row width does not match header");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

  void write(std::ostream& os, OutputFormat format) const {
    if (format == OutputFormat::csv) {
      for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << '\n';
      write_line(os, columns_, ",");
      for (const auto& row : rows_) {
        std::vector<std::string> cells;
        for (const auto& c : row) cells.push_back(c.csv);
        write_line(os, cells, ",");
      }
      return;
    }
    for (const auto& [k, v] : meta_) os << "- " << k << ": " << v << '\n';
    if (!meta_.empty()) os << '\n';
    os << "| ";
    write_line(os, columns_, " | ", " |");
    os << '|';
    for (std::size_t i = 0; i < columns_.size(); ++i) os << "---|";
    os << '\n';
    for (const auto& row : rows_) {
      std::vector<std::string> cells;
      for (const auto& c : row) cells.push_back(c.markdown);
      os << "| ";
      write_line(os, cells, " | ", " |");
    }
  }

 private:
  static void write_line(std::ostream& os, const std::vector<std::string>& cells, std::string_view sep,
                         std::string_view tail = "") {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << sep;
      os << cells[i];
    }
    os << tail << '\n';
  }

  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<Cell>> rows_;
};

inline Cell text_cell(std::string s) { return Cell{s, s}; }

}  // namespace emden_dq::cli

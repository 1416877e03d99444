#pragma once

// Report envelope shared by every CLI command, with CSV and JSON writers.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "swapschur/verify.hpp"

namespace swapschur::report {

inline constexpr const char* kSchema = "swapschur-report/1";

/// A table cell; std::monostate is written as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

struct Envelope {
  std::string tool = "swapschur";
  std::string version = SWAPSCHUR_VERSION;
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;  // echoed in order
  std::optional<std::uint64_t> seed;                         // set when output is stochastic
  std::vector<std::pair<std::string, std::string>> meta;     // e.g. marker_T
  Table table;
};

/// %.17g, so every value round-trips.
std::string format_double(double x);

std::string format_cell(const Cell& c);

/// `#`-prefixed metadata lines, then the header row, then data rows.
void write_csv(const Envelope& env, std::ostream& out);

/// One object with the metadata and `rows` as an array of objects keyed by
/// column name.
void write_json(const Envelope& env, std::ostream& out);

/// Verification results as a table: check, residual, tolerance, comparison,
/// passed, provenance.
Table checks_table(const std::vector<verify::CheckResult>& checks);

}  // namespace swapschur::report

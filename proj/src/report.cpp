#include "swapschur/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

#include "swapschur/rng.hpp"

namespace swapschur::report {

namespace {

nlohmann::ordered_json to_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          // JSON has no infinities; keep them readable as strings.
          if (!std::isfinite(v)) return format_double(v);
          return v;
        } else {
          return v;
        }
      },
      c);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("Table: row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          return std::to_string(v);
        }
      },
      c);
}

void write_csv(const Envelope& env, std::ostream& out) {
  out << "# tool: " << env.tool << ' ' << env.version << '\n';
  out << "# schema: " << kSchema << '\n';
  out << "# command: " << env.command << '\n';
  out << "# config:";
  for (const auto& [k, v] : env.config) out << ' ' << k << '=' << v;
  out << '\n';
  out << "# seed: " << (env.seed ? std::to_string(*env.seed) : "none") << '\n';
  out << "# rng: " << Rng::algorithm << '\n';
  for (const auto& [k, v] : env.meta) out << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < env.table.columns.size(); ++i) {
    out << (i ? "," : "") << env.table.columns[i];
  }
  out << '\n';
  for (const auto& row : env.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

void write_json(const Envelope& env, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["tool"] = env.tool;
  doc["version"] = env.version;
  doc["schema"] = kSchema;
  doc["command"] = env.command;
  auto& config = doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : env.config) config[k] = v;
  doc["seed"] = env.seed ? nlohmann::ordered_json(*env.seed) : nlohmann::ordered_json(nullptr);
  doc["rng"] = Rng::algorithm;
  auto& meta = doc["meta"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : env.meta) meta[k] = v;
  doc["columns"] = env.table.columns;
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : env.table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[env.table.columns[i]] = to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

Table checks_table(const std::vector<verify::CheckResult>& checks) {
  Table t;
  t.columns = {"check", "residual", "tolerance", "comparison", "passed", "provenance"};
  for (const auto& c : checks) {
    t.add_row({c.name, c.residual, c.tolerance, std::string(c.strict ? "<" : "<="), c.passed,
               std::string(verify::to_string(c.provenance))});
  }
  return t;
}

}  // namespace swapschur::report

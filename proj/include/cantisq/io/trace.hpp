#pragma once

// CSV trace files: '# key = value' header lines, one column-name line, rows.

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cantisq/constants.hpp"
#include "cantisq/io/config.hpp"

namespace cantisq::io {

inline constexpr const char* artifact_version = "1.0.0";

using Cell = std::variant<double, std::int64_t, std::string>;

struct TraceFile {
  std::string name;  // file stem
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void meta(std::string key, std::string value) { header.emplace_back(std::move(key), std::move(value)); }
  void derived(const std::string& key, double value) { header.emplace_back("derived." + key, format_double(value)); }
  void derived(const std::string& key, std::string value) { header.emplace_back("derived." + key, std::move(value)); }

  /// Index of a column by name, or -1.
  int column(const std::string& c) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == c) return static_cast<int>(i);
    return -1;
  }
  std::vector<double> numeric_column(const std::string& c) const {
    std::vector<double> out;
    const int idx = column(c);
    if (idx < 0) return out;
    for (const auto& r : rows) {
      const auto& cell = r[static_cast<std::size_t>(idx)];
      if (const auto* d = std::get_if<double>(&cell)) out.push_back(*d);
      else if (const auto* i = std::get_if<std::int64_t>(&cell)) out.push_back(static_cast<double>(*i));
    }
    return out;
  }
};

/// Header carrying the full run configuration plus unit convention and version.
inline TraceFile make_trace(const RunConfig& cfg, std::string name, std::vector<std::string> columns) {
  TraceFile t;
  t.name = std::move(name);
  t.meta("meta.version", artifact_version);
  t.meta("meta.units", units::convention);
  for (auto& kv : config_fields(cfg)) t.header.push_back(std::move(kv));
  t.columns = std::move(columns);
  return t;
}

inline std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

inline std::string write_csv(const TraceFile& t) {
  std::string out;
  for (const auto& [k, v] : t.header) out += "# " + k + " = " + v + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
    out += "\n";
  }
  return out;
}

}  // namespace cantisq::io

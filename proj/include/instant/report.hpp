#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

namespace instant {

/// 17 significant digits so a CSV value reads back to the same double.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Fixed-column CSV table with optional "# key=value" preamble lines.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void note(const std::string& key, const std::string& value) { notes_.emplace_back(key, value); }
  void note(const std::string& key, double value) { note(key, fmt(value)); }

  CsvTable& row() {
    rows_.emplace_back();
    return *this;
  }
  CsvTable& operator<<(const std::string& cell) {
    rows_.back().push_back(cell);
    return *this;
  }
  CsvTable& operator<<(const char* cell) { return *this << std::string(cell); }
  CsvTable& operator<<(double v) { return *this << fmt(v); }
  template <class I>
    requires std::is_integral_v<I>
  CsvTable& operator<<(I v) {
    return *this << std::to_string(v);
  }

  void write(std::ostream& out) const {
    for (const auto& [k, v] : notes_) out << "# " << k << "=" << v << "\n";
    write_row(out, columns_);
    for (const auto& r : rows_) write_row(out, r);
  }

private:
  static void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  }

  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> notes_;
  std::vector<std::vector<std::string>> rows_;
};

/// NaN and infinities become null; nlohmann::json keeps keys sorted.
inline nlohmann::json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline void write_json(std::ostream& out, const nlohmann::json& doc) { out << doc.dump(2) << "\n"; }

} // namespace instant

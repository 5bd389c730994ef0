#pragma once

// Tabular output. CSV: header row, LF endings, comma delimiter, no quoting,
// reals printed with 17 significant digits so they parse back bit-exactly.
// JSON: an array of objects with the same keys, in column order.

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "datalimit/planner.hpp"
#include "datalimit/units.hpp"

namespace datalimit {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

enum class OutputFormat { Csv, Json };

inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string format_cell(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_real(*d);
  return std::get<std::string>(c);
}

inline void write_checked(std::ostream& out, const std::string& chunk) {
  out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
  if (!out) throw std::runtime_error("write to output stream failed");
}

inline void emit_csv(const Table& t, std::ostream& out) {
  std::string line;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (i) line += ',';
    line += t.header[i];
  }
  line += '\n';
  write_checked(out, line);
  for (const auto& row : t.rows) {
    line.clear();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += ',';
      line += format_cell(row[i]);
    }
    line += '\n';
    write_checked(out, line);
  }
  out.flush();
}

inline nlohmann::ordered_json to_json(const Table& t) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < t.header.size(); ++i) {
      if (const double* d = std::get_if<double>(&row[i])) {
        obj[t.header[i]] = std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json();
      } else {
        obj[t.header[i]] = std::get<std::string>(row[i]);
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

inline void emit_json(const Table& t, std::ostream& out) {
  write_checked(out, to_json(t).dump(2) + "\n");
  out.flush();
}

inline void emit(const Table& t, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Csv)
    emit_csv(t, out);
  else
    emit_json(t, out);
}

inline std::string value_column(InfoUnit u) { return "value_" + std::string(unit_name(u)); }

/// Columns: one per axis, then value_<unit>, formula, trunc_err, status.
inline Table sweep_table(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  Table t;
  for (const Axis& a : spec.axes) t.header.emplace_back(param_name(a.param));
  t.header.push_back(value_column(spec.unit));
  t.header.insert(t.header.end(), {"formula", "trunc_err", "status"});
  t.rows.reserve(rows.size());
  for (const SweepRow& r : rows) {
    std::vector<Cell> cells(r.coords.begin(), r.coords.end());
    cells.emplace_back(r.value);
    cells.emplace_back(r.formula);
    cells.emplace_back(r.truncation_error);
    cells.emplace_back(std::string(status_name(r.status)));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace datalimit

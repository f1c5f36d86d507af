#pragma once

// Tabular output: CSV with a header line and 17 significant digits per value,
// plus a JSON sidecar "<path>.meta.json" holding parameters and normalizers.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "optomech/errors.hpp"

namespace optomech::app {

inline constexpr const char* kVersion = "1.0.0";

struct Dataset {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  std::vector<double> column(const std::string& name) const {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j] != name) continue;
      std::vector<double> out;
      out.reserve(rows.size());
      for (const auto& row : rows) out.push_back(row[j]);
      return out;
    }
    throw Error(ErrorCode::InvalidArgument, "no column '" + name + "'");
  }
};

inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline std::string to_csv(const Dataset& ds) {
  std::string out;
  for (std::size_t j = 0; j < ds.columns.size(); ++j) {
    if (j) out += ',';
    out += ds.columns[j];
  }
  out += '\n';
  for (const auto& row : ds.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_value(row[j]);
    }
    out += '\n';
  }
  return out;
}

inline std::string sidecar_path(const std::string& path) { return path + ".meta.json"; }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error(ErrorCode::ConfigError, "write to '" + path + "' failed");
}

inline void write_dataset(const Dataset& ds, const std::string& path) {
  write_text(path, to_csv(ds));
  write_text(sidecar_path(path), ds.meta.dump(2) + "\n");
}

}  // namespace optomech::app

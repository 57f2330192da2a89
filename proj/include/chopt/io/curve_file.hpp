#pragma once

#include <array>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chopt/io/format.hpp"
#include "chopt/optimizer.hpp"

namespace chopt::io {

inline constexpr const char* kCurveHeader = "ratio,q,eta_crit,phi1,phi2,phi3,phi4,nu1,nu2,nu3,nu4,k1,k2,k3,k4";

struct CurveRow {
  double ratio = 0.0;
  double q = 0.0;
  std::optional<double> eta_crit;
  std::array<double, 4> phi{};
  std::array<double, 4> nu{};
  std::optional<std::array<int, 4>> k;
};

inline CurveRow to_row(const OptimumRecord& record) {
  CurveRow row;
  row.ratio = record.ratio;
  row.q = record.report.q;
  row.eta_crit = record.report.eta_crit;
  for (std::size_t i = 0; i < 4; ++i) {
    row.phi[i] = record.config[i].phi;
    row.nu[i] = record.config[i].nu;
  }
  if (record.k) row.k = record.k->values();
  return row;
}

inline std::vector<CurveRow> to_rows(const std::vector<OptimumRecord>& records) {
  std::vector<CurveRow> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(to_row(r));
  return rows;
}

inline MeasurementConfig row_config(const CurveRow& row) {
  MeasurementConfig config;
  for (std::size_t i = 0; i < 4; ++i) config[i] = {row.phi[i], row.nu[i]};
  return config;
}

inline void write_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << kCurveHeader << '\n';
  for (const auto& row : rows) {
    out << format_double(row.ratio) << ',' << format_double(row.q) << ',' << format_optional(row.eta_crit);
    for (double v : row.phi) out << ',' << format_double(v);
    for (double v : row.nu) out << ',' << format_double(v);
    for (std::size_t i = 0; i < 4; ++i) {
      out << ',';
      if (row.k) out << (*row.k)[i];
    }
    out << '\n';
  }
}

inline std::vector<CurveRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCurveHeader) {
    throw Error(ErrorCode::InvalidArgument, "missing or unexpected curve header");
  }
  std::vector<CurveRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 15) throw Error(ErrorCode::InvalidArgument, "curve row needs 15 cells: " + line);
    CurveRow row;
    row.ratio = parse_double(cells[0]);
    row.q = parse_double(cells[1]);
    if (!cells[2].empty()) row.eta_crit = parse_double(cells[2]);
    for (std::size_t i = 0; i < 4; ++i) {
      row.phi[i] = parse_double(cells[3 + i]);
      row.nu[i] = parse_double(cells[7 + i]);
    }
    if (!cells[11].empty()) {
      std::array<int, 4> k{};
      for (std::size_t i = 0; i < 4; ++i) k[i] = parse_int(cells[11 + i]);
      row.k = k;
    }
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::ordered_json to_json(const CurveRow& row) {
  nlohmann::ordered_json j;
  j["ratio"] = row.ratio;
  j["q"] = row.q;
  j["eta_crit"] = row.eta_crit ? nlohmann::ordered_json(*row.eta_crit) : nlohmann::ordered_json(nullptr);
  j["phi"] = row.phi;
  j["nu"] = row.nu;
  j["k"] = row.k ? nlohmann::ordered_json(*row.k) : nlohmann::ordered_json(nullptr);
  return j;
}

inline CurveRow row_from_json(const nlohmann::ordered_json& j) {
  CurveRow row;
  row.ratio = j.at("ratio").get<double>();
  row.q = j.at("q").get<double>();
  if (!j.at("eta_crit").is_null()) row.eta_crit = j.at("eta_crit").get<double>();
  row.phi = j.at("phi").get<std::array<double, 4>>();
  row.nu = j.at("nu").get<std::array<double, 4>>();
  if (!j.at("k").is_null()) row.k = j.at("k").get<std::array<int, 4>>();
  return row;
}

}  // namespace chopt::io

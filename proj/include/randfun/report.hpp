#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "randfun/error.hpp"
#include "randfun/stats.hpp"

namespace randfun {

using ojson = nlohmann::ordered_json;

// Result of one experiment: per-trial rows plus summary statistics that can
// be recomputed from them. Rows are rendered as CSV, everything else as JSON.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<ojson>> rows;
};

struct ExperimentReport {
  std::string name;
  ojson config = ojson::object();
  std::uint64_t seed = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<ojson>> rows;
  ojson summary = ojson::object();
  bool passed = true;
  bool exploratory = false;  // reported without a pass/fail claim
  std::vector<std::string> notes;
  std::vector<Table> tables;         // extra CSV tables written as <name>_<table>.csv
  ojson top_level = ojson::object();  // keys copied to the top of the JSON summary

  void add_row(std::vector<ojson> row) {
    require(row.size() == columns.size(), ErrorCode::InvalidArgument, "row width does not match the columns");
    rows.push_back(std::move(row));
  }

  std::string config_hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(stats::fnv1a(config.dump())));
    return buf;
  }

  ojson summary_json() const {
    ojson j;
    j["name"] = name;
    j["seed"] = seed;
    j["config_hash"] = config_hash();
    j["config"] = config;
    j["passed"] = passed;
    j["exploratory"] = exploratory;
    j["summary"] = summary;
    j["notes"] = notes;
    for (const auto& el : top_level.items()) j[el.key()] = el.value();
    return j;
  }

  void write_csv(std::ostream& os) const { write_table(os, columns, rows); }

  void write_table(std::ostream& os, const std::vector<std::string>& cols,
                   const std::vector<std::vector<ojson>>& body) const {
    os << "# " << name << " seed=" << seed << " config_hash=" << config_hash() << '\n';
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& row : body) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
      os << '\n';
    }
  }

  /// Writes <name>.csv, any extra tables and <name>.json into dir.
  std::vector<std::filesystem::path> write_files(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    const auto csv = dir / (name + ".csv");
    const auto js = dir / (name + ".json");
    std::vector<std::filesystem::path> out{csv};
    {
      std::ofstream f(csv);
      write_csv(f);
      require(f.good(), ErrorCode::InvalidArgument, "cannot write " + csv.string());
    }
    for (const auto& t : tables) {
      const auto p = dir / (name + "_" + t.name + ".csv");
      std::ofstream f(p);
      write_table(f, t.columns, t.rows);
      require(f.good(), ErrorCode::InvalidArgument, "cannot write " + p.string());
      out.push_back(p);
    }
    {
      std::ofstream f(js);
      f << summary_json().dump(2) << '\n';
      require(f.good(), ErrorCode::InvalidArgument, "cannot write " + js.string());
    }
    out.push_back(js);
    return out;
  }

  static std::string format_cell(const ojson& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number_integer()) return v.dump();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
  }

  static std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }
};

/// JSON number or null for non-finite values.
inline ojson num(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

}  // namespace randfun

#pragma once

// Deterministic CSV tables and the bound comparison report.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fatmax/bounds.hpp"
#include "fatmax/dims.hpp"
#include "fatmax/rng.hpp"

namespace fatmax {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Fixed-precision formatting so identical inputs give identical bytes.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string fmt(std::size_t v) { return std::to_string(v); }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

inline void write_csv(const Table& t, std::ostream& out) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
    out << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  write_csv(t, os);
  return os.str();
}

/// One solved max-instance: the dimension of F_max and of each component.
struct BoundInstance {
  std::string id;
  std::size_t k = 1;
  std::optional<double> d;
  double gamma = 1.0;
  DimResult fat_max;
  std::vector<std::size_t> fat_components;
  std::uint64_t seed = 0;
};

struct BoundRow {
  std::string instance_id;
  std::vector<double> rhs;  // NaN when the bound lacks a parameter for this instance
  double probe = 0.0;       // c Log(k) sum fat, the Conjecture 2 shape
  std::vector<std::string> violations;  // asserted ids with fat_max > rhs
};

struct BoundReport {
  Table table;
  std::vector<BoundRow> rows;
  std::size_t asserted_violations = 0;
};

inline BoundParams instance_params(const BoundInstance& inst, const BoundParams& base) {
  BoundParams p = base;
  p.gamma = inst.gamma;
  p.k = static_cast<double>(inst.k);
  if (inst.d) p.d = inst.d;
  double D = 0.0;
  for (auto f : inst.fat_components) D += static_cast<double>(f);
  p.D = D;
  return p;
}

inline std::string components_string(const std::vector<std::size_t>& fats) {
  std::string s;
  for (std::size_t i = 0; i < fats.size(); ++i) s += (i ? ";" : "") + std::to_string(fats[i]);
  return s;
}

/// Only exact left-hand sides are compared against asserted bounds; lower
/// bounds from budgeted searches are reported but cannot refute anything
/// beyond their certified value, which is what fat_max.dimension holds.
inline BoundReport bound_report(const std::vector<BoundInstance>& instances, const BoundParams& base,
                                const std::vector<BoundId>& ids) {
  BoundReport rep;
  auto& h = rep.table.header;
  h = {"instance_id", "k", "d", "gamma", "fat_max", "fat_max_exact", "fat_components"};
  for (auto id : ids) h.push_back("rhs_" + std::string(bound_name(id)));
  for (auto id : ids) h.push_back("slack_" + std::string(bound_name(id)));
  h.insert(h.end(), {"probe_conj2", "slack_probe_conj2", "probe_flag", "violations", "seed", "generator"});

  for (const auto& inst : instances) {
    const BoundParams p = instance_params(inst, base);
    const double lhs = static_cast<double>(inst.fat_max.dimension);
    BoundRow row{inst.id, {}, p.c * Log(static_cast<double>(inst.k)) * *p.D, {}};
    for (auto id : ids) {
      double v = std::numeric_limits<double>::quiet_NaN();
      try {
        v = evaluate_bound(id, p);
      } catch (const std::invalid_argument&) {
      }
      row.rhs.push_back(v);
      if (bound_is_asserted(id) && !std::isnan(v) && lhs > v + 1e-9) row.violations.emplace_back(bound_name(id));
    }
    rep.asserted_violations += row.violations.size();

    auto ratio = [&](double rhs) {
      if (std::isnan(rhs)) return std::string("NA");
      return lhs == 0.0 ? std::string(rhs >= 0.0 ? "inf" : "-inf") : fmt(rhs / lhs);
    };
    std::vector<std::string> cells{inst.id,
                                   fmt(inst.k),
                                   inst.d ? fmt(*inst.d) : "NA",
                                   fmt(inst.gamma),
                                   fmt(inst.fat_max.dimension),
                                   inst.fat_max.exact ? "1" : "0",
                                   components_string(inst.fat_components)};
    for (double v : row.rhs) cells.push_back(std::isnan(v) ? "NA" : fmt(v));
    for (double v : row.rhs) cells.push_back(ratio(v));
    cells.push_back(fmt(row.probe));
    cells.push_back(ratio(row.probe));
    cells.push_back("PROBE");
    std::string viol;
    for (std::size_t i = 0; i < row.violations.size(); ++i) viol += (i ? ";" : "") + row.violations[i];
    cells.push_back(viol);
    cells.push_back(std::to_string(inst.seed));
    cells.push_back(kGeneratorVersion);
    rep.table.rows.push_back(std::move(cells));
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace fatmax

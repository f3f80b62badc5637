#pragma once

// JSON serialization of classes, measures, certificates, covers,
// disambiguations, affine witnesses and k-fold max specs.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fatmax/affine.hpp"
#include "fatmax/compose.hpp"
#include "fatmax/core.hpp"
#include "fatmax/covering.hpp"
#include "fatmax/dims.hpp"
#include "fatmax/disambig.hpp"

namespace fatmax::io {

using json = nlohmann::ordered_json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("malformed JSON in '" + path + "': " + e.what());
  }
}

inline void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

namespace detail {

inline const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw SchemaError(std::string("missing field '") + name + "'");
  return j.at(name);
}

inline std::vector<std::string> parse_domain(const json& j) {
  const json& d = field(j, "domain");
  if (!d.is_array()) throw SchemaError("'domain' must be an array");
  std::vector<std::string> out;
  for (const auto& x : d) {
    if (x.is_string()) out.push_back(x.get<std::string>());
    else if (x.is_number()) out.push_back(x.dump());
    else throw SchemaError("domain labels must be strings or numbers");
  }
  return out;
}

inline const json& parse_rows(const json& j) {
  const json& v = field(j, "values");
  if (!v.is_array()) throw SchemaError("'values' must be an array of rows");
  for (const auto& row : v)
    if (!row.is_array()) throw SchemaError("each row of 'values' must be an array");
  return v;
}

}  // namespace detail

inline json to_json(const SampledClass& F) {
  json j;
  j["domain"] = F.domain();
  j["values"] = F.to_rows();
  if (!F.metadata().empty()) {
    json meta = json::object();
    for (const auto& [k, v] : F.metadata()) meta[k] = v;
    j["metadata"] = meta;
  }
  return j;
}

inline SampledClass class_from_json(const json& j) {
  auto domain = detail::parse_domain(j);
  std::vector<std::vector<double>> rows;
  for (const auto& row : detail::parse_rows(j)) {
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw SchemaError("class values must be numbers");
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  Metadata meta;
  if (j.contains("metadata") && j["metadata"].is_object())
    for (const auto& [k, v] : j["metadata"].items()) meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
  return SampledClass(std::move(domain), std::move(rows), std::move(meta));
}

inline json to_json(const PartialClass& P) {
  json j;
  j["domain"] = P.domain();
  json rows = json::array();
  for (const auto& row : P.row_data()) {
    json r = json::array();
    for (Label l : row) {
      if (l == Label::star) r.push_back("*");
      else r.push_back(l == Label::one ? 1 : 0);
    }
    rows.push_back(std::move(r));
  }
  j["values"] = std::move(rows);
  return j;
}

inline PartialClass partial_from_json(const json& j) {
  auto domain = detail::parse_domain(j);
  std::vector<PartialClass::Row> rows;
  for (const auto& row : detail::parse_rows(j)) {
    PartialClass::Row r;
    for (const auto& v : row) {
      if (v.is_string() && v.get<std::string>() == "*") r.push_back(Label::star);
      else if (v.is_number_integer() && v.get<long long>() == 0) r.push_back(Label::zero);
      else if (v.is_number_integer() && v.get<long long>() == 1) r.push_back(Label::one);
      else throw SchemaError("partial class entry " + v.dump() + " is not one of 0, 1, \"*\"");
    }
    rows.push_back(std::move(r));
  }
  return PartialClass(std::move(domain), std::move(rows));
}

inline SampledClass load_class(const std::string& path) { return class_from_json(read_json_file(path)); }
inline void save_class(const SampledClass& F, const std::string& path) { write_json_file(to_json(F), path); }
inline PartialClass load_partial_class(const std::string& path) { return partial_from_json(read_json_file(path)); }
inline void save_partial_class(const PartialClass& P, const std::string& path) { write_json_file(to_json(P), path); }

/// {"weights": [...]}; a missing object means uniform over n points.
inline Measure measure_from_json(const json& j, std::size_t n) {
  if (j.is_null()) return Measure::uniform(n);
  const json& w = detail::field(j, "weights");
  if (!w.is_array()) throw SchemaError("'weights' must be an array");
  std::vector<double> weights;
  for (const auto& v : w) {
    if (!v.is_number()) throw SchemaError("weights must be numbers");
    weights.push_back(v.get<double>());
  }
  if (weights.size() != n) throw SchemaError("measure has " + std::to_string(weights.size()) +
                                             " weights for " + std::to_string(n) + " points");
  return Measure(std::move(weights));
}

inline json to_json(const ShatterCertificate& c) {
  json j;
  j["subset"] = c.subset;
  j["shift"] = c.shift;
  json w = json::object();
  for (std::size_t y = 0; y < c.witnesses.size(); ++y)
    w[pattern_string(static_cast<Pattern>(y), c.subset.size())] = c.witnesses[y];
  j["witnesses"] = std::move(w);
  j["gamma"] = c.gamma;
  return j;
}

inline ShatterCertificate certificate_from_json(const json& j) {
  ShatterCertificate c;
  c.subset = detail::field(j, "subset").get<IndexSet>();
  c.shift = detail::field(j, "shift").get<std::vector<double>>();
  c.gamma = detail::field(j, "gamma").get<double>();
  const json& w = detail::field(j, "witnesses");
  if (!w.is_object()) throw SchemaError("'witnesses' must map sign patterns to rows");
  const std::size_t m = c.subset.size();
  if (m > 24) throw SchemaError("certificate subset too large");
  std::vector<std::optional<Index>> slots(std::size_t{1} << m);
  for (const auto& [key, row] : w.items()) {
    if (key.size() != m) throw SchemaError("pattern '" + key + "' has the wrong length");
    slots[parse_pattern(key)] = row.get<Index>();
  }
  for (std::size_t y = 0; y < slots.size(); ++y) {
    if (!slots[y]) throw SchemaError("certificate is missing pattern " + pattern_string(static_cast<Pattern>(y), m));
    c.witnesses.push_back(*slots[y]);
  }
  return c;
}

inline json to_json(const DimResult& r) {
  json j;
  j["dimension"] = r.dimension;
  j["exact"] = r.exact;
  j["status"] = r.exact ? "exact" : "lower_bound";
  j["certificate"] = r.certificate ? to_json(*r.certificate) : json(nullptr);
  j["stats"] = {{"subsets_examined", r.stats.subsets_examined},
                {"nodes", r.stats.nodes},
                {"prunes", r.stats.prunes}};
  return j;
}

inline json to_json(const CoverReport& r) {
  json j;
  j["p"] = std::isinf(r.p) ? json("inf") : json(r.p);
  j["radius"] = r.radius;
  j["measure"] = {{"weights", r.weights}};
  j["members"] = r.members;
  j["size"] = r.size();
  j["exact"] = r.exact;
  return j;
}

inline json to_json(const Disambiguation& D) {
  json rows = json::array();
  for (const auto& row : D.total.row_data()) {
    json r = json::array();
    for (Label l : row) r.push_back(l == Label::one ? 1 : 0);
    rows.push_back(std::move(r));
  }
  return {{"domain", D.total.domain()}, {"total", std::move(rows)}, {"assignment", D.assignment}};
}

inline Disambiguation disambiguation_from_json(const json& j) {
  json as_partial = {{"domain", detail::field(j, "domain")}, {"values", detail::field(j, "total")}};
  PartialClass total = partial_from_json(as_partial);
  if (!total.is_total()) throw SchemaError("disambiguation rows must be total");
  return {std::move(total), detail::field(j, "assignment").get<std::vector<Index>>()};
}

inline json to_json(const AffineFunction& f) { return {{"w", f.w}, {"b", f.b}}; }

inline json to_json(const SimplexWitness& w) {
  json fs = json::array();
  for (const auto& f : w.functions) fs.push_back(to_json(f));
  return {{"points", w.points}, {"functions", std::move(fs)}, {"certificate", to_json(w.certificate)}};
}

inline MaxSpec max_spec_from_json(const json& j) {
  MaxSpec spec;
  if (j.contains("mode")) {
    const auto mode = j["mode"].get<std::string>();
    if (mode == "full") spec.mode = MaxMode::full;
    else if (mode == "sampled") spec.mode = MaxMode::sampled;
    else throw SchemaError("max mode must be 'full' or 'sampled'");
  }
  if (j.contains("cap")) spec.cap = j["cap"].get<std::uint64_t>();
  if (j.contains("count")) spec.count = j["count"].get<std::uint64_t>();
  if (j.contains("dedup")) spec.dedup = j["dedup"].get<bool>();
  if (spec.mode == MaxMode::sampled) {
    if (!j.contains("seed")) throw SchemaError("sampled max mode requires a seed");
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  return spec;
}

inline json to_json(const MaxSpec& s) {
  json j{{"mode", s.mode == MaxMode::full ? "full" : "sampled"}, {"cap", s.cap}, {"dedup", s.dedup}};
  if (s.mode == MaxMode::sampled) {
    j["count"] = s.count;
    j["seed"] = s.seed;
  }
  return j;
}

}  // namespace fatmax::io

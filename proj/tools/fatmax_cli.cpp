// fatmax: batch driver for the dimension, covering and bound toolkit.
// Exit codes: 0 success, 1 config error, 2 asserted inequality violated, 3 budget exceeded.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include "fatmax/fatmax.hpp"

using namespace fatmax;
using io::json;

namespace {

enum Exit { kOk = 0, kConfig = 1, kViolation = 2, kBudget = 3 };

struct Config {
  std::vector<std::string> inputs;
  std::vector<double> gammas{1.0};
  std::vector<std::string> ps{"2"};
  std::vector<double> ts{0.5};
  std::size_t k = 2;
  std::size_t d = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> budget_nodes;
  std::size_t max_subset = 24;
  std::string out;
  std::string format = "json";
  std::string method = "exact";
  std::string measure;
  std::string suite = "all";
  std::string mode = "full";
  std::size_t count = 0;
  std::size_t trials = 50;
  std::size_t m = 5;
  std::size_t m_max = 6;
  std::size_t targets = 1000;
  double r = 1.0;
};

struct Output {
  json doc;
  Table table;
  int status = kOk;
};

double parse_p(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "infinity") return kInfinity;
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !(p >= 1.0)) throw SchemaError("--p must be a number >= 1 or 'inf', got '" + s + "'");
  return p;
}

std::uint64_t require_seed(const Config& c, const char* cmd) {
  if (!c.seed) throw SchemaError(std::string(cmd) + " is randomized and needs --seed");
  return *c.seed;
}

SearchLimits search_limits(const Config& c) {
  SearchLimits l;
  l.max_subset = c.max_subset;
  if (c.budget_nodes) l.node_budget = *c.budget_nodes;
  return l;
}

const std::string& single_input(const Config& c) {
  if (c.inputs.size() != 1) throw SchemaError("exactly one --input is required");
  return c.inputs.front();
}

json provenance(const Config& c) {
  json j;
  j["generator"] = kGeneratorVersion;
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  return j;
}

// fat / faat ------------------------------------------------------------------

Output cmd_dimension(const Config& c, bool zero_shift) {
  auto F = io::load_class(single_input(c));
  Output o;
  o.doc = provenance(c);
  o.doc["command"] = zero_shift ? "faat" : "fat";
  o.doc["input"] = c.inputs.front();
  o.table.header = {"gamma", "dimension", "status", "subset", "nodes"};
  json results = json::array();
  for (double gamma : c.gammas) {
    auto res = zero_shift ? faat_dim(F, gamma, search_limits(c)) : fat_dim(F, gamma, search_limits(c));
    if (!res.exact) o.status = kBudget;
    json r = io::to_json(res);
    json entry;
    entry["gamma"] = gamma;
    entry.update(r);
    results.push_back(entry);
    std::string subset;
    if (res.certificate)
      for (Index x : res.certificate->subset) subset += (subset.empty() ? "" : ";") + F.domain()[x];
    o.table.rows.push_back({fmt(gamma), fmt(res.dimension), res.exact ? "exact" : "lower_bound", subset,
                            fmt(static_cast<std::size_t>(res.stats.nodes))});
  }
  o.doc["results"] = results;
  return o;
}

Output cmd_vc(const Config& c) {
  auto P = io::load_partial_class(single_input(c));
  auto res = vc_dim_partial(P, search_limits(c));
  Output o;
  o.doc = provenance(c);
  o.doc["command"] = "vc";
  o.doc["input"] = c.inputs.front();
  o.doc["result"] = io::to_json(res);
  o.table.header = {"dimension", "status"};
  o.table.rows.push_back({fmt(res.dimension), res.exact ? "exact" : "lower_bound"});
  if (!res.exact) o.status = kBudget;
  return o;
}

// cover -------------------------------------------------------------------------

Output cmd_cover(const Config& c) {
  auto F = io::load_class(single_input(c));
  const Measure mu =
      c.measure.empty() ? Measure::uniform(F.cols()) : io::measure_from_json(io::read_json_file(c.measure), F.cols());
  CoverMethod method;
  if (c.method == "exact") {
    method = CoverMethod::exact;
  } else if (c.method == "greedy") {
    method = CoverMethod::greedy;
  } else {
    throw SchemaError("--method for cover must be exact or greedy");
  }
  CoverLimits limits;
  if (c.budget_nodes) limits.node_budget = *c.budget_nodes;
  Output o;
  o.doc = provenance(c);
  o.doc["command"] = "cover";
  o.doc["input"] = c.inputs.front();
  o.table.header = {"p", "t", "method", "size", "exact"};
  json results = json::array();
  for (const auto& ps : c.ps)
    for (double t : c.ts) {
      const double p = parse_p(ps);
      auto rep = covering_number(F, MetricSpec(p, mu), t, method, limits);
      results.push_back(io::to_json(rep));
      o.table.rows.push_back({std::isinf(p) ? std::string("inf") : fmt(p), fmt(t), c.method, fmt(rep.size()), rep.exact ? "true" : "false"});
    }
  o.doc["results"] = results;
  return o;
}

// max ---------------------------------------------------------------------------

Output cmd_max(const Config& c) {
  if (c.inputs.empty()) throw SchemaError("max needs at least one --input");
  std::vector<SampledClass> cs;
  for (const auto& path : c.inputs) cs.push_back(io::load_class(path));
  MaxSpec spec;
  if (c.mode == "sampled") {
    spec.mode = MaxMode::sampled;
    spec.seed = require_seed(c, "max --mode sampled");
    if (c.count == 0) throw SchemaError("max --mode sampled needs --count");
    spec.count = c.count;
  } else if (c.mode != "full") {
    throw SchemaError("--mode must be full or sampled");
  }
  auto F = k_fold_max(cs, spec);
  auto meta = F.metadata();
  meta["generator"] = kGeneratorVersion;
  meta["max_mode"] = c.mode;
  if (c.seed) meta["seed"] = std::to_string(*c.seed);
  Output o;
  o.doc = io::to_json(SampledClass(F.domain(), [&] {
    std::vector<std::vector<double>> rows;
    for (Index i = 0; i < F.rows(); ++i) rows.emplace_back(F.row(i).begin(), F.row(i).end());
    return rows;
  }(), meta));
  o.table.header = F.domain();
  for (Index i = 0; i < F.rows(); ++i) {
    std::vector<std::string> row;
    for (double v : F.row(i)) row.push_back(fmt(v));
    o.table.rows.push_back(row);
  }
  return o;
}

// disambiguate --------------------------------------------------------------------

Output cmd_disambiguate(const Config& c) {
  auto P = io::load_partial_class(single_input(c));
  Disambiguation D;
  if (c.method == "exact") {
    ExactDisambigLimits limits;
    if (c.budget_nodes) limits.node_budget = *c.budget_nodes;
    D = min_vc_disambiguation_exact(P, limits).disambiguation;
  } else if (c.method == "greedy") {
    D = greedy_disambiguation(P);
  } else if (c.method == "singleton") {
    D = singleton_disambiguation(P);
  } else {
    throw SchemaError("--method for disambiguate must be exact, greedy or singleton");
  }
  auto check = disambiguation_size_check(P, D);
  Output o;
  o.doc = provenance(c);
  o.doc["command"] = "disambiguate";
  o.doc["input"] = c.inputs.front();
  o.doc["method"] = c.method;
  o.doc["vc_partial"] = check.vc_partial;
  o.doc["vc_total"] = vc_of_total(D.total);
  o.doc["distinct_rows"] = check.distinct_rows;
  o.doc["log_bound_fine"] = check.log_bound_fine;
  o.doc["log_bound_coarse"] = std::isnan(check.log_bound_coarse) ? json(nullptr) : json(check.log_bound_coarse);
  o.doc["size_check_holds"] = check.holds;
  o.doc["disambiguation"] = io::to_json(D);
  o.table.header = {"method", "vc_partial", "vc_total", "distinct_rows", "log_bound_fine", "size_check_holds"};
  o.table.rows.push_back({c.method, fmt(check.vc_partial), fmt(vc_of_total(D.total)), fmt(check.distinct_rows),
                          fmt(check.log_bound_fine), check.holds ? "true" : "false"});
  return o;
}

// verify --------------------------------------------------------------------------

struct SuiteResult {
  explicit SuiteResult(std::string name) : suite(std::move(name)) {}
  std::string suite;
  std::size_t cases = 0;
  std::size_t violations = 0;
  double worst = std::nan("");
  std::string note;
};

std::vector<SampledClass> random_components(Rng& rng, std::uint64_t seed, std::size_t k, double hi) {
  const auto cols = static_cast<std::size_t>(rng.uniform_int(2, 4));
  std::vector<SampledClass> cs;
  for (std::size_t i = 0; i < k; ++i) {
    const auto rows = static_cast<std::size_t>(rng.uniform_int(2, k == 2 ? 5 : 3));
    cs.push_back(random_grid_class(rows, cols, -hi, hi, 0.5, Rng::derive(seed, i + 1)));
  }
  return cs;
}

SuiteResult suite_dims(std::uint64_t seed) {
  SuiteResult s("dims");
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(Rng::derive(seed, i));
    auto F = random_grid_class(static_cast<std::size_t>(rng.uniform_int(2, 6)),
                               static_cast<std::size_t>(rng.uniform_int(1, 4)), -2, 2, 0.5, Rng::derive(seed, i + 500));
    for (double gamma : {0.5, 1.0}) {
      ++s.cases;
      s.violations += fat_dim(F, gamma).dimension != fat_via_shift_scan(F, gamma).dimension;
      s.violations += faat_dim(F, gamma).dimension !=
                      vc_dim_partial(discretize_class(F, DiscretizerSpec(gamma))).dimension;
    }
  }
  s.note = "gap search vs shift scan; faat vs vc of discretization";
  return s;
}

std::vector<BoundInstance> max_instances(std::uint64_t seed, std::size_t count, std::optional<std::size_t> fixed_k,
                                         double gamma) {
  std::vector<BoundInstance> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t s = Rng::derive(seed, i);
    Rng rng(s);
    const std::size_t k = fixed_k ? *fixed_k : (rng.coin() ? 2 : 3);
    auto cs = random_components(rng, s, k, i % 4 == 3 ? 0.5 : 2.0);
    BoundInstance inst;
    inst.id = "max-" + std::to_string(i);
    inst.k = k;
    inst.gamma = gamma;
    inst.seed = s;
    inst.fat_max = fat_dim(k_fold_max(cs), gamma);
    for (const auto& c : cs) inst.fat_components.push_back(fat_dim(c, gamma).dimension);
    out.push_back(std::move(inst));
  }
  return out;
}

SuiteResult suite_thm1(std::uint64_t seed) {
  SuiteResult s("thm1");
  auto instances = max_instances(Rng::derive(seed, 1), 100, std::nullopt, 1.0);
  auto rep = bound_report(instances, {}, {BoundId::thm1});
  s.cases = instances.size();
  s.violations = rep.asserted_violations;
  double worst = 0.0;
  for (const auto& i : instances) {
    std::size_t D = 0;
    for (auto f : i.fat_components) D += f;
    if (D == 0) s.violations += i.fat_max.dimension != 0;
    worst = std::max(worst, static_cast<double>(i.fat_max.dimension) / std::max<std::size_t>(D, 1));
  }
  s.worst = worst;
  s.note = "worst = max fat(F_max) / D";
  return s;
}

SuiteResult suite_product(std::uint64_t seed) {
  SuiteResult s("product");
  for (std::uint64_t i = 0; s.cases < 200 * 3; ++i) {
    Rng rng(Rng::derive(Rng::derive(seed, 2), i));
    const std::size_t k = rng.coin() ? 2 : 3;
    const auto cols = static_cast<std::size_t>(rng.uniform_int(2, 5));
    std::vector<SampledClass> cs;
    for (std::size_t j = 0; j < k; ++j)
      cs.push_back(random_grid_class(static_cast<std::size_t>(rng.uniform_int(1, 12)), cols, -1, 1, 0.5,
                                     Rng::derive(rng.next_u64(), j)));
    if (dedup_rows(k_fold_max(cs)).rows() > 20) continue;
    const double t = 0.25 * static_cast<double>(rng.uniform_int(1, 4));
    std::size_t prev = 0;
    for (double p : {1.0, 2.0, kInfinity}) {
      auto rep = verify_product_bound(cs, MetricSpec::uniform(p, cols), t);
      ++s.cases;
      s.violations += !rep.holds || rep.lhs < prev;
      prev = rep.lhs;
    }
  }
  s.note = "product bound and p-monotonicity of N(F_max)";
  return s;
}

SuiteResult suite_pointwise(std::uint64_t seed) {
  SuiteResult s("pointwise");
  auto pair = check_max_pair_inequalities(100000, Rng::derive(seed, 3));
  auto tuple = check_max_tuple_inequalities(1000, Rng::derive(seed, 4));
  s.cases = 101000;
  s.worst = std::max(pair.worst(), tuple.max_violation);
  s.violations = s.worst > 1e-12;
  s.note = "max violation of the pointwise max inequalities";
  return s;
}

SuiteResult suite_affine(std::uint64_t seed) {
  SuiteResult s("affine");
  for (std::size_t d = 1; d <= 5; ++d)
    for (double gamma : {0.5, 1.0, 2.0}) {
      auto w = simplex_shatter_witness(d, gamma);
      ++s.cases;
      s.violations += !check_certificate(w.cls, w.certificate, ShiftMode::zero);
    }
  for (std::size_t d = 1; d <= 2; ++d)
    for (const auto& pts : candidate_configurations(d, d + 2, 30, Rng::derive(seed, 5))) {
      ++s.cases;
      s.violations += union_shatters(pts, 1);
    }
  for (std::size_t d = 1; d <= 3; ++d)
    for (double gamma : {0.25, 0.5, 1.0, 2.0}) {
      AffineSpec spec;
      spec.d = d;
      spec.semi_bounded = true;
      spec.count = 64;
      spec.seed = Rng::derive(seed, 60 + d);
      auto F = sample_affine_class(spec, sample_ball_points(d + 2, d, spec.seed + 1)).cls;
      BoundParams p;
      p.d = static_cast<double>(d);
      p.R = spec.R;
      p.gamma = gamma;
      ++s.cases;
      s.violations += static_cast<double>(fat_dim(F, gamma).dimension) > evaluate_bound(BoundId::fat_hyp, p);
    }
  s.note = "simplex witnesses, no shattered d+2 sets, semi-bounded cap";
  return s;
}

SuiteResult suite_blumer(std::uint64_t seed) {
  SuiteResult s("blumer");
  std::vector<BoundInstance> instances;
  for (std::size_t d = 1; d <= 2; ++d)
    for (std::size_t k = 2; k <= 3; ++k)
      for (std::uint64_t i = 0; i < 8; ++i) {
        const std::uint64_t base = Rng::derive(Rng::derive(seed, 7), d * 100 + k * 10 + i);
        auto pts = sample_ball_points(k == 2 ? 10 : 8, d, base);
        std::vector<SampledClass> cs;
        for (std::size_t j = 0; j < k; ++j) {
          AffineSpec spec;
          spec.d = d;
          spec.count = k == 2 ? 12 : 6;
          spec.seed = Rng::derive(base, j);
          cs.push_back(sample_affine_class(spec, pts).cls);
        }
        BoundInstance inst;
        inst.id = "affine-" + std::to_string(i);
        inst.k = k;
        inst.d = static_cast<double>(d);
        inst.gamma = 0.1;
        inst.seed = base;
        inst.fat_max = faat_dim(k_fold_max(cs), 0.1);
        instances.push_back(std::move(inst));
      }
  auto rep = bound_report(instances, {}, {BoundId::thm4_blumer});
  s.cases = instances.size();
  s.violations = rep.asserted_violations;
  s.note = "certified faat(F_max) against 2(d+1)k log(3k)";
  return s;
}

SuiteResult suite_union(std::uint64_t seed) {
  SuiteResult s("union");
  auto line = halfspace_union_shatter_search(1, 2, 4, 1'000'000, seed);
  auto plane = halfspace_union_shatter_search(2, 1, 5, 1'000'000, seed);
  s.cases = 2;
  s.violations = (line.best != 2) + (plane.best != 3);
  s.note = "d=1,k=2 -> " + std::to_string(line.best) + "; d=2,k=1 -> " + std::to_string(plane.best);
  return s;
}

SuiteResult suite_maurey(std::uint64_t seed) {
  SuiteResult s("maurey");
  double worst = 0.0;
  for (std::size_t m = 1; m <= 10; ++m)
    for (double t : {0.8, 1.0}) {
      std::vector<std::vector<double>> X(m, std::vector<double>(m, 0.0));
      for (std::size_t i = 0; i < m; ++i) X[i][i] = 1.0;
      auto net = maurey_cover(X, 1.0, t);
      s.violations += static_cast<double>(net.points.size()) > net.size_bound;
      Rng rng(Rng::derive(Rng::derive(seed, 8), m * 10 + static_cast<std::uint64_t>(t * 10)));
      for (int j = 0; j < 1000; ++j) {
        std::vector<double> a(m);
        double l1 = 0.0;
        for (double& v : a) l1 += std::abs(v = rng.normal());
        const double scale = std::pow(rng.uniform(), 0.25) / l1;
        for (double& v : a) v *= scale;
        const double dist = distance_to_net(net, a);
        worst = std::max(worst, dist / t);
        ++s.cases;
        s.violations += dist > t + 1e-12;
      }
    }
  s.worst = worst;
  s.note = "worst = max distance to net / t";
  return s;
}

SuiteResult suite_disambig(std::uint64_t seed) {
  SuiteResult s("disambig");
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(Rng::derive(Rng::derive(seed, 9), i));
    auto P = random_partial_class(static_cast<std::size_t>(rng.uniform_int(2, 8)),
                                  static_cast<std::size_t>(rng.uniform_int(2, 5)), 0.35, rng.next_u64());
    auto exact = min_vc_disambiguation_exact(P);
    auto greedy = greedy_disambiguation(P);
    ++s.cases;
    s.violations += exact.vc > vc_of_total(greedy.total) || !is_disambiguation(P, exact.disambiguation);
    if (vc_dim_partial(P).dimension >= 1) {
      ++s.cases;
      s.violations += !disambiguation_size_check(P, exact.disambiguation).holds;
    }
  }
  s.note = "exact vc <= greedy vc; distinct-row size check";
  return s;
}

SuiteResult suite_elementary(std::uint64_t seed) {
  SuiteResult s("elementary");
  auto rep = check_elementary_facts(10000, Rng::derive(seed, 10));
  s.cases = rep.samples;
  s.worst = rep.worst();
  s.violations = rep.worst() > 1e-9;
  s.note = "worst relative excess";
  return s;
}

Output cmd_verify(const Config& c) {
  const std::uint64_t seed = require_seed(c, "verify");
  using Suite = SuiteResult (*)(std::uint64_t);
  const std::vector<std::pair<std::string, Suite>> suites{
      {"dims", suite_dims},       {"thm1", suite_thm1},       {"product", suite_product},
      {"pointwise", suite_pointwise}, {"affine", suite_affine}, {"blumer", suite_blumer},
      {"union", suite_union},     {"maurey", suite_maurey},   {"disambig", suite_disambig},
      {"elementary", suite_elementary}};
  Output o;
  o.table.header = {"suite", "cases", "violations", "worst", "note", "seed", "generator"};
  o.doc = provenance(c);
  o.doc["command"] = "verify";
  json results = json::array();
  bool found = false;
  for (const auto& [name, fn] : suites) {
    if (c.suite != "all" && c.suite != name) continue;
    found = true;
    auto r = fn(seed);
    if (r.violations > 0) o.status = kViolation;
    o.table.rows.push_back(
        {r.suite, fmt(r.cases), fmt(r.violations), fmt(r.worst), r.note, std::to_string(seed), kGeneratorVersion});
    results.push_back({{"suite", r.suite},
                       {"cases", r.cases},
                       {"violations", r.violations},
                       {"worst", std::isnan(r.worst) ? json(nullptr) : json(r.worst)},
                       {"note", r.note}});
  }
  if (!found) throw SchemaError("unknown --suite '" + c.suite + "'");
  o.doc["results"] = results;
  return o;
}

// probe-conjecture ------------------------------------------------------------------

Output cmd_probe(const Config& c) {
  const std::uint64_t seed = require_seed(c, "probe-conjecture");
  if (c.k < 1) throw SchemaError("--k must be >= 1");
  const double gamma = c.gammas.front();
  auto instances = max_instances(seed, c.trials, c.k, gamma);
  BoundParams base;
  auto rep = bound_report(instances, base, {BoundId::thm1});
  Output o;
  o.table = rep.table;
  o.doc = provenance(c);
  o.doc["command"] = "probe-conjecture";
  o.doc["k"] = c.k;
  o.doc["gamma"] = gamma;
  json rows = json::array();
  for (const auto& row : rep.table.rows) {
    json r;
    for (std::size_t i = 0; i < row.size(); ++i) r[rep.table.header[i]] = row[i];
    rows.push_back(r);
  }
  o.doc["rows"] = rows;
  if (rep.asserted_violations > 0) o.status = kViolation;
  for (const auto& i : instances)
    if (!i.fat_max.exact) o.status = kBudget;
  return o;
}

// lower-bound-search ------------------------------------------------------------------

Output cmd_lower_bound(const Config& c) {
  const std::uint64_t seed = require_seed(c, "lower-bound-search");
  const std::uint64_t budget = c.budget_nodes.value_or(1'000'000);
  auto res = halfspace_union_shatter_search(c.d, c.k, c.m_max, budget, seed);
  Output o;
  o.doc = provenance(c);
  o.doc["command"] = "lower-bound-search";
  o.doc["d"] = c.d;
  o.doc["k"] = c.k;
  o.doc["best"] = res.best;
  o.doc["status"] = res.exhausted ? "lower_bound" : "complete";
  o.doc["witness"] = res.witness;
  o.doc["configurations"] = res.configurations;
  o.doc["lp_calls"] = res.lp_calls;
  if (!res.witness.empty()) {
    auto uc = union_witness_certificate(res.witness, c.k, c.gammas.front());
    o.doc["certificate"] = io::to_json(uc.certificate);
    o.doc["certificate_valid"] = check_certificate(uc.cls, uc.certificate, ShiftMode::zero);
  }
  o.table.header = {"d", "k", "best", "status", "configurations", "lp_calls", "seed", "generator"};
  o.table.rows.push_back({fmt(c.d), fmt(c.k), fmt(res.best), res.exhausted ? "lower_bound" : "complete",
                          std::to_string(res.configurations), std::to_string(res.lp_calls), std::to_string(seed),
                          kGeneratorVersion});
  if (res.exhausted) o.status = kBudget;
  return o;
}

// maurey ---------------------------------------------------------------------------

Output cmd_maurey(const Config& c) {
  std::vector<std::vector<double>> X;
  if (c.inputs.empty()) {
    X.assign(c.m, std::vector<double>(c.m, 0.0));
    for (std::size_t i = 0; i < c.m; ++i) X[i][i] = 1.0;
  } else {
    auto j = io::read_json_file(single_input(c));
    try {
      X = io::detail::field(j, "vectors").get<std::vector<std::vector<double>>>();
    } catch (const json::exception& e) {
      throw SchemaError(std::string("vectors must be an array of numeric arrays: ") + e.what());
    }
  }
  Output o;
  o.doc = provenance(c);
  o.doc["command"] = "maurey";
  o.table.header = {"t", "m", "terms", "net_size", "size_bound", "targets", "uncovered", "seed", "generator"};
  json results = json::array();
  for (double t : c.ts) {
    auto net = maurey_cover(X, c.r, t);
    std::size_t uncovered = 0;
    if (c.targets > 0) {
      Rng rng(Rng::derive(require_seed(c, "maurey with --targets"), static_cast<std::uint64_t>(t * 1000)));
      for (std::size_t s = 0; s < c.targets; ++s) {
        std::vector<double> a(X.size());
        double l1 = 0.0;
        for (double& v : a) l1 += std::abs(v = rng.normal());
        const double scale = c.r * std::pow(rng.uniform(), 0.25) / l1;
        std::vector<double> z(X.front().size(), 0.0);
        for (std::size_t i = 0; i < X.size(); ++i)
          for (std::size_t q = 0; q < z.size(); ++q) z[q] += a[i] * scale * X[i][q];
        uncovered += distance_to_net(net, z) > t + 1e-12;
      }
    }
    if (uncovered > 0 || static_cast<double>(net.points.size()) > net.size_bound) o.status = kViolation;
    results.push_back({{"t", t},
                       {"terms", net.terms},
                       {"net_size", net.points.size()},
                       {"size_bound", net.size_bound},
                       {"targets", c.targets},
                       {"uncovered", uncovered}});
    o.table.rows.push_back({fmt(t), fmt(X.size()), fmt(net.terms), fmt(net.points.size()), fmt(net.size_bound),
                            fmt(c.targets), fmt(uncovered), c.seed ? std::to_string(*c.seed) : "", kGeneratorVersion});
  }
  o.doc["results"] = results;
  return o;
}

void emit(const Output& o, const Config& c) {
  std::ostringstream text;
  if (c.format == "csv") {
    write_csv(o.table, text);
  } else {
    text << o.doc.dump(1) << '\n';
  }
  if (c.out.empty()) {
    std::cout << text.str();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw SchemaError("cannot write " + c.out);
  f << text.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fatmax: fat-shattering dimension, covering and bound toolkit"};
  app.require_subcommand(1);
  Config c;
  std::uint64_t seed = 0, budget = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", c.inputs, "input JSON file (repeat for max)");
    sub->add_option("--gamma", c.gammas, "margin(s)")->check(CLI::PositiveNumber);
    sub->add_option("--p", c.ps, "exponent(s): number >= 1 or inf");
    sub->add_option("--t", c.ts, "radius / radii")->check(CLI::PositiveNumber);
    sub->add_option("--k", c.k, "number of components");
    sub->add_option("--d", c.d, "affine dimension");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--budget-nodes", budget, "search node budget")->check(CLI::PositiveNumber);
    sub->add_option("--max-subset", c.max_subset, "largest subset size searched")->check(CLI::Range(1, 24));
    sub->add_option("--out", c.out, "output path (stdout when omitted)");
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* fat = app.add_subcommand("fat", "fat-shattering dimension");
  auto* faat = app.add_subcommand("faat", "zero-shift fat-shattering dimension");
  auto* vc = app.add_subcommand("vc", "VC dimension of a partial class");
  auto* cover = app.add_subcommand("cover", "covering numbers");
  auto* max = app.add_subcommand("max", "k-fold pointwise maximum of classes");
  auto* dis = app.add_subcommand("disambiguate", "disambiguate a partial class");
  auto* verify = app.add_subcommand("verify", "run the property suites");
  auto* probe = app.add_subcommand("probe-conjecture", "bound slack report on random max instances");
  auto* lbs = app.add_subcommand("lower-bound-search", "halfspace-union shattering search");
  auto* maurey = app.add_subcommand("maurey", "Maurey net for the absolute convex hull");
  for (auto* s : {fat, faat, vc, cover, max, dis, verify, probe, lbs, maurey}) common(s);
  cover->add_option("--method", c.method, "exact or greedy");
  cover->add_option("--measure", c.measure, "measure JSON (uniform when omitted)");
  max->add_option("--mode", c.mode, "full or sampled");
  max->add_option("--count", c.count, "sampled tuples");
  dis->add_option("--method", c.method, "exact, greedy or singleton");
  verify->add_option("--suite", c.suite, "suite name or all");
  probe->add_option("--trials", c.trials, "number of instances");
  lbs->add_option("--m-max", c.m_max, "largest set size tried")->check(CLI::Range(1, 10));
  maurey->add_option("--m", c.m, "basis dimension when no --input is given")->check(CLI::PositiveNumber);
  maurey->add_option("--r", c.r, "scale of the hull")->check(CLI::PositiveNumber);
  maurey->add_option("--targets", c.targets, "sampled targets to check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  for (auto* s : app.get_subcommands()) {
    if (s->count("--seed")) c.seed = seed;
    if (s->count("--budget-nodes")) c.budget_nodes = budget;
    if (s == verify || s == probe) {
      if (!s->count("--format")) c.format = "csv";
    }
  }

  try {
    Output o;
    if (fat->parsed()) o = cmd_dimension(c, false);
    if (faat->parsed()) o = cmd_dimension(c, true);
    if (vc->parsed()) o = cmd_vc(c);
    if (cover->parsed()) o = cmd_cover(c);
    if (max->parsed()) o = cmd_max(c);
    if (dis->parsed()) o = cmd_disambiguate(c);
    if (verify->parsed()) o = cmd_verify(c);
    if (probe->parsed()) o = cmd_probe(c);
    if (lbs->parsed()) o = cmd_lower_bound(c);
    if (maurey->parsed()) o = cmd_maurey(c);
    emit(o, c);
    if (o.status == kBudget) std::cerr << "fatmax: budget exceeded, results are flagged lower bounds\n";
    if (o.status == kViolation) std::cerr << "fatmax: asserted inequality violated\n";
    return o.status;
  } catch (const BudgetExceeded& e) {
    std::cerr << "fatmax: budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fatmax: invalid configuration: " << e.what() << '\n';
    return kConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "fatmax: invalid configuration: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "fatmax: error: " << e.what() << '\n';
    return kConfig;
  }
}

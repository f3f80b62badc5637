// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fatmax/fatmax.hpp"
#include "oracles.hpp"

using namespace fatmax;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void run(int id, const char* title, const std::function<Outcome()>& body, double time_limit_s = 0.0) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_s > 0.0 && secs >= time_limit_s) {
    out.pass = false;
    out.detail += "; runtime limit " + fmt(time_limit_s) + " s exceeded";
  }
  if (!out.pass) ++failures;
  std::printf("%s [%2d] %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string count(const char* what, std::size_t n) { return std::string(what) + "=" + std::to_string(n); }

// Small random class on a half-integer grid: 2..6 rows, 1..4 points.
SampledClass small_class(std::uint64_t seed) {
  Rng rng(seed);
  const auto rows = static_cast<std::size_t>(rng.uniform_int(2, 6));
  const auto cols = static_cast<std::size_t>(rng.uniform_int(1, 4));
  return random_grid_class(rows, cols, -2, 2, 0.5, Rng::derive(seed, 1));
}

Outcome criterion1() {
  std::size_t bad = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    auto F = cube_class(n, 1.0);
    auto fat = fat_dim(F, 1.0);
    auto faat = faat_dim(F, 1.0);
    bad += fat.dimension != n || faat.dimension != n || !fat.exact || !faat.exact;
    bad += !check_certificate(F, *fat.certificate, ShiftMode::shifted);
    bad += !check_certificate(F, *faat.certificate, ShiftMode::zero);
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto F = random_grid_class(1, 1 + seed % 8, -3, 3, 0.5, seed);
    bad += fat_dim(F, 1.0).dimension != 0 || faat_dim(F, 1.0).dimension != 0;
  }
  return {bad == 0, "cubes n=1..8 and 20 single-row classes, " + count("mismatches", bad)};
}

Outcome criterion2() {
  std::size_t bad = 0, classes = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    for (double gamma : {0.5, 1.0}) {
      auto F = small_class(seed);
      ++classes;
      const auto gap = fat_dim(F, gamma).dimension;
      const auto scan = fat_via_shift_scan(F, gamma).dimension;
      const auto ref = oracle::fat(F, gamma);
      bad += gap != scan || gap != ref;
      // The gap decision on every subset against the definition.
      for (std::size_t m = 1; m <= F.cols(); ++m)
        for (const auto& s : oracle::subsets_of_size(F.cols(), m)) {
          auto one = restrict(F, s);
          const bool by_gap = shatter_decision(F, s, gamma, ShiftMode::shifted).has_value();
          bad += by_gap != (oracle::fat(one, gamma) == m);
        }
    }
  return {bad == 0, count("classes", classes) + ", " + count("disagreements", bad)};
}

Outcome criterion3() {
  std::size_t bad = 0, classes = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    for (double gamma : {0.5, 1.0}) {
      auto F = small_class(seed);
      ++classes;
      bad += faat_dim(F, gamma).dimension != vc_dim_partial(discretize_class(F, DiscretizerSpec(gamma))).dimension;
    }
  return {bad == 0, count("classes", classes) + ", " + count("disagreements", bad)};
}

// Components for the max-class suites. Narrow value ranges give fat = 0.
std::vector<SampledClass> tiny_components(std::uint64_t seed, bool degenerate) {
  Rng rng(seed);
  const std::size_t k = rng.coin() ? 2 : 3;
  const auto cols = static_cast<std::size_t>(rng.uniform_int(2, 4));
  std::vector<SampledClass> cs;
  for (std::size_t i = 0; i < k; ++i) {
    const auto rows = static_cast<std::size_t>(rng.uniform_int(2, k == 2 ? 5 : 3));
    const double hi = degenerate ? 0.5 : 2.0;
    cs.push_back(random_grid_class(rows, cols, -hi, hi, 0.5, Rng::derive(seed, i + 1)));
  }
  return cs;
}

Outcome criterion4() {
  std::vector<BoundInstance> instances;
  std::size_t degenerate_bad = 0, degenerate = 0;
  for (std::uint64_t seed = 0; seed < 160; ++seed) {
    const bool narrow = seed % 4 == 3;
    auto cs = tiny_components(seed + 4000, narrow);
    BoundInstance inst;
    inst.id = "thm1-" + std::to_string(seed);
    inst.k = cs.size();
    inst.gamma = 1.0;
    inst.seed = seed + 4000;
    inst.fat_max = fat_dim(k_fold_max(cs), 1.0);
    for (const auto& c : cs) inst.fat_components.push_back(fat_dim(c, 1.0).dimension);
    std::size_t D = 0;
    for (auto f : inst.fat_components) D += f;
    if (D == 0) {
      ++degenerate;
      degenerate_bad += inst.fat_max.dimension != 0;
    }
    if (!inst.fat_max.exact) return {false, "non-exact search on " + inst.id};
    instances.push_back(std::move(inst));
  }
  auto rep = bound_report(instances, {}, {BoundId::thm1});
  return {rep.asserted_violations == 0 && degenerate_bad == 0 && degenerate > 0,
          count("instances", instances.size()) + ", " + count("THM1 violations", rep.asserted_violations) + ", " +
              count("D=0 instances", degenerate) + ", " + count("D=0 with fat>0", degenerate_bad)};
}

Outcome criterion5() {
  std::size_t instances = 0, product_bad = 0, mono_bad = 0, max_component_rows = 0, attempts = 0;
  Rng pick(55);
  for (std::uint64_t seed = 0; instances < 220; ++seed) {
    ++attempts;
    Rng rng(Rng::derive(5000, seed));
    const std::size_t k = rng.coin() ? 2 : 3;
    const auto cols = static_cast<std::size_t>(rng.uniform_int(2, 5));
    std::vector<SampledClass> cs;
    for (std::size_t i = 0; i < k; ++i) {
      const auto rows = static_cast<std::size_t>(rng.uniform_int(1, 12));
      cs.push_back(random_grid_class(rows, cols, -1, 1, 0.5, Rng::derive(seed, 100 + i)));
    }
    // Exact covers are limited to 20 rows; redraw larger maxima.
    if (dedup_rows(k_fold_max(cs)).rows() > 20) continue;
    for (const auto& c : cs) max_component_rows = std::max(max_component_rows, c.rows());
    ++instances;
    const double t = std::vector<double>{0.25, 0.5, 0.75, 1.0}[pick.index(4)];
    std::vector<std::size_t> by_p;
    for (double p : {1.0, 2.0, kInfinity}) {
      const auto m = MetricSpec::uniform(p, cols);
      auto rep = verify_product_bound(cs, m, t);
      product_bad += !rep.holds;
      by_p.push_back(rep.lhs);
      // Componentwise p-monotonicity at the same radius.
      std::size_t prev = 0;
      for (double q : {1.0, 2.0, kInfinity}) {
        const auto n = covering_number(dedup_rows(cs[0]), MetricSpec::uniform(q, cols), t, CoverMethod::exact).size();
        mono_bad += n < prev;
        prev = n;
      }
    }
    mono_bad += by_p[0] > by_p[1] || by_p[1] > by_p[2];
  }
  return {product_bad == 0 && mono_bad == 0,
          count("instances", instances) + " (p in {1,2,inf} each), " + count("product violations", product_bad) +
              ", " + count("p-monotonicity violations", mono_bad) + ", " +
              count("largest component", max_component_rows) + ", " + count("draws", attempts)};
}

Outcome criterion6() {
  auto pair = check_max_pair_inequalities(100000, 6);
  auto tuple = check_max_tuple_inequalities(1000, 6);
  const double worst = std::max(pair.worst(), tuple.max_violation);
  return {worst <= 1e-12, "1e5 quadruples, 1e3 k-tuples, max violation " + fmt(worst)};
}

Outcome criterion7() {
  std::size_t bad_witness = 0, shattered_d2 = 0, configs = 0, lemma13_bad = 0, lemma13_instances = 0;
  for (std::size_t d = 1; d <= 5; ++d)
    for (double gamma : {0.5, 1.0, 2.0}) {
      auto w = simplex_shatter_witness(d, gamma);
      bad_witness += !check_certificate(w.cls, w.certificate, ShiftMode::zero) || w.points.size() != d + 1;
    }
  for (std::size_t d = 1; d <= 2; ++d) {
    for (std::uint64_t seed = 0; seed < 4; ++seed)
      for (const auto& pts : candidate_configurations(d, d + 2, 30, seed)) {
        ++configs;
        shattered_d2 += union_shatters(pts, 1);
      }
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      AffineSpec spec;
      spec.d = d;
      spec.count = 300;
      spec.seed = seed;
      auto P = sign_threshold_class(sample_affine_class(spec, sample_ball_points(d + 2, d, seed + 77)).cls);
      ++configs;
      shattered_d2 += vc_dim_partial(P).dimension >= d + 2;
    }
  }
  for (std::size_t d = 1; d <= 3; ++d)
    for (double R : {0.5, 1.0})
      for (double gamma : {0.25, 0.5, 1.0, 2.0})
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
          AffineSpec spec;
          spec.d = d;
          spec.R = R;
          spec.semi_bounded = true;
          spec.count = 64;
          spec.seed = seed * 1000 + d * 10;
          auto F = sample_affine_class(spec, sample_ball_points(d + 2, d, spec.seed + 1)).cls;
          BoundParams p;
          p.d = static_cast<double>(d);
          p.R = R;
          p.gamma = gamma;
          ++lemma13_instances;
          lemma13_bad += static_cast<double>(fat_dim(F, gamma).dimension) > evaluate_bound(BoundId::fat_hyp, p);
        }
  return {bad_witness == 0 && shattered_d2 == 0 && lemma13_bad == 0,
          count("invalid simplex witnesses", bad_witness) + " of 15, " + count("configurations", configs) + ", " +
              count("VC-shattered d+2 sets", shattered_d2) + ", " + count("semi-bounded instances", lemma13_instances) +
              ", " + count("min{d+1,(3R/gamma)^2} violations", lemma13_bad)};
}

Outcome criterion8() {
  std::vector<BoundInstance> instances;
  for (std::size_t d = 1; d <= 2; ++d)
    for (std::size_t k = 2; k <= 3; ++k)
      for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const std::uint64_t base = 8000 + seed * 31 + d * 7 + k;
        auto pts = sample_ball_points(k == 2 ? 10 : 8, d, base);
        std::vector<SampledClass> cs;
        for (std::size_t i = 0; i < k; ++i) {
          AffineSpec spec;
          spec.d = d;
          spec.count = k == 2 ? 12 : 6;
          spec.seed = Rng::derive(base, i);
          cs.push_back(sample_affine_class(spec, pts).cls);
        }
        for (double gamma : {0.1, 0.25}) {
          BoundInstance inst;
          inst.id = "affine-d" + std::to_string(d) + "-k" + std::to_string(k) + "-" + std::to_string(seed);
          inst.k = k;
          inst.d = static_cast<double>(d);
          inst.gamma = gamma;
          inst.seed = base;
          inst.fat_max = faat_dim(k_fold_max(cs), gamma);
          for (const auto& c : cs) inst.fat_components.push_back(faat_dim(c, gamma).dimension);
          instances.push_back(std::move(inst));
        }
      }
  // Union witnesses give the largest certified values available at desk scale.
  for (auto [d, k] : {std::pair<std::size_t, std::size_t>{1, 2}, {1, 3}, {2, 2}, {2, 3}}) {
    auto res = halfspace_union_shatter_search(d, k, 6, 20000, 11, 8);
    auto uc = union_witness_certificate(res.witness, k, 1.0);
    if (!check_certificate(uc.cls, uc.certificate, ShiftMode::zero)) return {false, "union witness failed to validate"};
    BoundInstance inst;
    inst.id = "union-d" + std::to_string(d) + "-k" + std::to_string(k);
    inst.k = k;
    inst.d = static_cast<double>(d);
    inst.gamma = 1.0;
    inst.seed = 11;
    inst.fat_max = faat_dim(uc.cls, 1.0);
    instances.push_back(std::move(inst));
  }
  auto rep = bound_report(instances, {}, {BoundId::thm4_blumer});
  std::size_t largest = 0;
  for (const auto& i : instances) largest = std::max(largest, i.fat_max.dimension);
  return {rep.asserted_violations == 0, count("instances", instances.size()) + ", " +
                                            count("Blumer violations", rep.asserted_violations) + ", " +
                                            count("largest certified faat", largest)};
}

Outcome criterion9() {
  auto line = halfspace_union_shatter_search(1, 2, 4, 1'000'000, 9);
  auto plane = halfspace_union_shatter_search(2, 1, 5, 1'000'000, 9);
  auto oracle_shatters = [](const std::vector<Point>& pts, std::size_t k) {
    std::vector<double> xs;
    for (const auto& p : pts) xs.push_back(p[0]);
    auto sep = [&](const std::vector<Index>& b, const std::vector<Index>& n) {
      return pts.front().size() == 1 ? oracle::separable_1d(xs, b, n) : oracle::separable_2d(pts, b, n);
    };
    for (std::uint32_t y = 0; y < (1U << pts.size()); ++y)
      if (!oracle::union_labeling_feasible(pts.size(), y, k, sep)) return false;
    return true;
  };
  bool ok = line.best == 2 && plane.best == 3 && !line.exhausted && !plane.exhausted;
  ok = ok && oracle_shatters(line.witness, 2) && oracle_shatters(plane.witness, 1);
  std::size_t refuted = 0, checked = 0;
  for (const auto& c : candidate_configurations(1, 3, 24, 9)) {
    ++checked;
    refuted += !oracle_shatters(c, 2);
  }
  for (const auto& c : candidate_configurations(2, 4, 24, 9)) {
    ++checked;
    refuted += !oracle_shatters(c, 1);
  }
  ok = ok && refuted == checked;
  return {ok, "d=1,k=2 -> " + std::to_string(line.best) + ", d=2,k=1 -> " + std::to_string(plane.best) +
                  ", oracle confirms witnesses and refutes " + std::to_string(refuted) + "/" + std::to_string(checked) +
                  " next-size candidates"};
}

Outcome criterion10() {
  std::size_t far = 0, oversize = 0, targets = 0;
  for (std::size_t m = 1; m <= 10; ++m) {
    std::vector<std::vector<double>> X(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) X[i][i] = 1.0;
    for (double t : {0.8, 1.0}) {
      auto net = maurey_cover(X, 1.0, t);
      oversize += static_cast<double>(net.points.size()) > std::pow(3 + 3 * m * t * t, std::ceil(1 / (t * t)));
      Rng rng(Rng::derive(10, m * 10 + static_cast<std::uint64_t>(t * 10)));
      for (int s = 0; s < 1000; ++s) {
        std::vector<double> a(m);
        double l1 = 0.0;
        for (double& v : a) l1 += std::abs(v = rng.normal());
        const double scale = std::pow(rng.uniform(), 0.25) / l1;
        for (double& v : a) v *= scale;
        ++targets;
        far += distance_to_net(net, a) > t + 1e-12;
      }
    }
  }
  return {far == 0 && oversize == 0,
          count("targets", targets) + ", " + count("uncovered", far) + ", " + count("nets over size bound", oversize)};
}

Outcome criterion11() {
  // Exhaustive: every multiset of at most 3 rows over {0,1,*}^3.
  std::vector<PartialClass::Row> alphabet;
  for (int code = 0; code < 27; ++code) {
    PartialClass::Row r;
    for (int x = 0, c = code; x < 3; ++x, c /= 3) r.push_back(static_cast<Label>(c % 3));
    alphabet.push_back(r);
  }
  std::size_t vc0 = 0, singleton_bad = 0, total = 0;
  std::function<void(std::vector<PartialClass::Row>&, int)> rec = [&](std::vector<PartialClass::Row>& rows, int from) {
    if (!rows.empty()) {
      ++total;
      PartialClass P(rows);
      const bool zero = vc_dim_partial(P).dimension == 0;
      if (zero) {
        ++vc0;
        auto D = singleton_disambiguation(P);
        singleton_bad += !is_disambiguation(P, D) || D.total.rows() != 1 || vc_of_total(D.total) != 0;
        for (std::size_t x = 0; x < 3; ++x) {
          bool one = false;
          for (const auto& r : rows) one |= r[x] == Label::one;
          singleton_bad += D.total.at(0, x) != (one ? Label::one : Label::zero);
        }
      } else {
        bool threw = false;
        try {
          singleton_disambiguation(P);
        } catch (const std::invalid_argument&) {
          threw = true;
        }
        singleton_bad += !threw;
      }
    }
    if (rows.size() == 3) return;
    for (int c = from; c < 27; ++c) {
      rows.push_back(alphabet[c]);
      rec(rows, c);
      rows.pop_back();
    }
  };
  std::vector<PartialClass::Row> rows;
  rec(rows, 0);

  std::size_t greedy_bad = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(Rng::derive(11, seed));
    auto P = random_partial_class(static_cast<std::size_t>(rng.uniform_int(2, 8)),
                                  static_cast<std::size_t>(rng.uniform_int(2, 5)), 0.35, Rng::derive(11, seed + 1000));
    auto exact = min_vc_disambiguation_exact(P);
    auto greedy = greedy_disambiguation(P);
    greedy_bad += !is_disambiguation(P, exact.disambiguation) || !is_disambiguation(P, greedy) ||
                  exact.vc > vc_of_total(greedy.total) || exact.vc < vc_dim_partial(P).dimension;
  }

  std::size_t size_checks = 0, size_bad = 0;
  for (std::size_t n : {2u, 3u, 4u})
    for (std::uint64_t seed = 0; size_checks < n * 40 && seed < 5000; ++seed) {
      auto P = random_partial_class(6, n, 0.3, Rng::derive(n, seed));
      if (vc_dim_partial(P).dimension == 0) continue;
      auto exact = min_vc_disambiguation_exact(P);
      auto check = disambiguation_size_check(P, exact.disambiguation);
      ++size_checks;
      size_bad += !check.holds;
    }
  return {singleton_bad == 0 && greedy_bad == 0 && size_bad == 0,
          count("partial classes", total) + ", " + count("vc=0", vc0) + ", " + count("singleton errors", singleton_bad) +
              ", " + count("exact>greedy", greedy_bad) + ", " + count("size checks", size_checks) + ", " +
              count("size violations", size_bad)};
}

Outcome criterion12() {
  auto rep = check_elementary_facts(10000, 12);
  return {rep.worst() <= 1e-9, "1e4 tuples, hypotheses held " + std::to_string(rep.log2x_hypothesis_held) + "/" +
                                   std::to_string(rep.log2y_hypothesis_held) + ", max relative violation " +
                                   fmt(rep.worst())};
}

}  // namespace

int main() {
  run(1, "exact dimensions of cube classes", criterion1, 60.0);
  run(2, "fat_dim vs shift scan vs definition oracle", criterion2);
  run(3, "faat equals vc of the discretized class", criterion3);
  run(4, "max-class bound 25 D log^2(90 D)", criterion4);
  run(5, "covering product bound and p-monotonicity", criterion5);
  run(6, "pointwise max inequalities", criterion6);
  run(7, "affine witnesses, d+2 non-shattering, semi-bounded cap", criterion7);
  run(8, "Blumer bound 2(d+1)k log(3k) on affine maxima", criterion8);
  run(9, "halfspace-union shattering search", criterion9, 120.0);
  run(10, "Maurey net coverage and size", criterion10);
  run(11, "disambiguation checks", criterion11);
  run(12, "elementary facts", criterion12);
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}

#pragma once

// Affine function classes on the Euclidean unit ball: seeded samplers,
// explicit simplex shattering witnesses, a linear separability oracle, and a
// search for point sets shattered by unions of k halfspaces.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fatmax/core.hpp"
#include "fatmax/dims.hpp"
#include "fatmax/lp.hpp"
#include "fatmax/rng.hpp"

namespace fatmax {

using Point = std::vector<double>;

struct AffineFunction {
  std::vector<double> w;
  double b = 0.0;

  double operator()(std::span<const double> x) const {
    double v = b;
    for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * x[i];
    return v;
  }
};

/// Parameter set for sampled affine classes. Bounded: ||w|| <= R and |b| <= R.
/// Semi-bounded: ||w|| <= R with the intercept drawn from [-b_clamp, b_clamp].
struct AffineSpec {
  std::size_t d = 1;
  double R = 1.0;
  bool semi_bounded = false;
  double b_clamp = 0.0;  // 0 selects 2R for semi-bounded classes
  std::size_t count = 16;
  std::uint64_t seed = 0;

  void validate() const {
    if (d < 1) throw std::invalid_argument("affine dimension must be >= 1");
    if (!(R > 0.0)) throw std::invalid_argument("affine bound R must be positive");
    if (count < 1) throw std::invalid_argument("affine sample count must be >= 1");
  }
  double intercept_bound() const { return semi_bounded ? (b_clamp > 0.0 ? b_clamp : 2 * R) : R; }
};

struct AffineSample {
  SampledClass cls;
  std::vector<AffineFunction> functions;
};

inline double norm(std::span<const double> x) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  return std::sqrt(sq);
}

inline void check_in_unit_ball(const std::vector<Point>& points, std::size_t d) {
  for (const auto& p : points) {
    if (p.size() != d) throw std::invalid_argument("point dimension does not match d");
    if (norm(p) > 1.0 + 1e-12) throw std::invalid_argument("point lies outside the unit ball");
  }
}

/// Uniform draw from the radius-R ball in R^d.
inline std::vector<double> sample_ball(Rng& rng, std::size_t d, double R) {
  std::vector<double> v(d);
  double n = 0.0;
  do {
    for (double& x : v) x = rng.normal();
    n = norm(v);
  } while (n == 0.0);
  const double radius = R * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  for (double& x : v) x *= radius / n;
  return v;
}

inline AffineSample sample_affine_class(const AffineSpec& spec, const std::vector<Point>& points) {
  spec.validate();
  if (points.empty()) throw std::invalid_argument("need at least one point");
  check_in_unit_ball(points, spec.d);
  Rng rng(spec.seed);
  AffineSample out;
  std::vector<std::vector<double>> rows;
  const double bmax = spec.intercept_bound();
  for (std::size_t j = 0; j < spec.count; ++j) {
    AffineFunction f{sample_ball(rng, spec.d, spec.R), rng.uniform(-bmax, bmax)};
    std::vector<double> row;
    for (const auto& p : points) row.push_back(f(p));
    rows.push_back(std::move(row));
    out.functions.push_back(std::move(f));
  }
  Metadata meta{{"generator", kGeneratorVersion},
                {"family", spec.semi_bounded ? "affine-semi-bounded" : "affine-bounded"},
                {"d", std::to_string(spec.d)},
                {"R", std::to_string(spec.R)},
                {"seed", std::to_string(spec.seed)}};
  out.cls = SampledClass(default_labels(points.size()), std::move(rows), std::move(meta));
  return out;
}

/// Random points in the unit ball.
inline std::vector<Point> sample_ball_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(sample_ball(rng, d, 1.0));
  return pts;
}

struct SimplexWitness {
  std::vector<Point> points;
  std::vector<AffineFunction> functions;  // functions[y] realizes pattern y
  SampledClass cls;
  ShatterCertificate certificate;
};

/// d+1 affinely independent points {-e_1, e_1, e_2, ..., e_d} and, for each
/// sign pattern y, the affine function interpolating f(x_i) = gamma y_i.
/// For this point set the interpolation system solves in closed form:
/// b = gamma (y_0 + y_1) / 2, w_1 = gamma (y_1 - y_0) / 2, w_j = gamma y_j - b.
inline SimplexWitness simplex_shatter_witness(std::size_t d, double gamma) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const std::size_t m = d + 1;
  SimplexWitness out;
  for (std::size_t i = 0; i < m; ++i) {
    Point p(d, 0.0);
    if (i == 0) p[0] = -1.0;
    else p[i - 1] = 1.0;
    out.points.push_back(std::move(p));
  }
  const std::size_t n_patterns = std::size_t{1} << m;
  std::vector<std::vector<double>> rows;
  for (std::size_t y = 0; y < n_patterns; ++y) {
    auto target = [&](std::size_t i) { return gamma * pattern_sign(static_cast<Pattern>(y), i); };
    AffineFunction f{std::vector<double>(d, 0.0), (target(0) + target(1)) / 2};
    f.w[0] = (target(1) - target(0)) / 2;
    for (std::size_t j = 1; j < d; ++j) f.w[j] = target(j + 1) - f.b;
    std::vector<double> row;
    for (const auto& p : out.points) row.push_back(f(p));
    rows.push_back(std::move(row));
    out.functions.push_back(std::move(f));
  }
  out.cls = SampledClass(default_labels(m), std::move(rows),
                         {{"family", "affine-simplex-witness"}, {"d", std::to_string(d)}});
  out.certificate.subset.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.certificate.subset[i] = i;
  out.certificate.shift.assign(m, 0.0);
  out.certificate.gamma = gamma;
  out.certificate.witnesses.resize(n_patterns);
  for (std::size_t y = 0; y < n_patterns; ++y) out.certificate.witnesses[y] = y;
  return out;
}

/// Affine f with labels[i] f(points[i]) >= 1 for all i, if one exists.
inline std::optional<AffineFunction> separating_affine(const std::vector<Point>& points, std::span<const int> labels) {
  if (points.size() != labels.size()) throw std::invalid_argument("one label per point");
  if (points.empty()) return AffineFunction{{}, 0.0};
  const std::size_t d = points.front().size();
  std::vector<std::vector<double>> A;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d) throw std::invalid_argument("points differ in dimension");
    if (labels[i] != 1 && labels[i] != -1) throw std::invalid_argument("labels must be +1 or -1");
    std::vector<double> row;
    for (double v : points[i]) row.push_back(labels[i] * v);
    row.push_back(labels[i]);
    A.push_back(std::move(row));
  }
  auto z = lp::find_margin_point(A);
  if (!z) return std::nullopt;
  AffineFunction f{std::vector<double>(z->begin(), z->begin() + static_cast<std::ptrdiff_t>(d)), (*z)[d]};
  return f;
}

/// Strict linear separability of a labeled point set.
inline bool separability_oracle(const std::vector<Point>& points, std::span<const int> labels) {
  return separating_affine(points, labels).has_value();
}

namespace detail {

// Affine f >= 1 on `group`, <= -1 on `negatives`.
inline std::optional<AffineFunction> separate_masks(const std::vector<Point>& pts, std::uint32_t group,
                                                    std::uint32_t negatives, std::uint64_t& lp_calls) {
  std::vector<Point> sub;
  std::vector<int> labels;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (group >> i & 1U) {
      sub.push_back(pts[i]);
      labels.push_back(1);
    } else if (negatives >> i & 1U) {
      sub.push_back(pts[i]);
      labels.push_back(-1);
    }
  }
  ++lp_calls;
  return separating_affine(sub, labels);
}

}  // namespace detail

/// Halfspace functions realizing the labeling `positives` (bitmask over
/// points) as a union of at most k halfspaces: each positive gets value >= 1
/// under some function, every negative gets <= -1 under all of them.
inline std::optional<std::vector<AffineFunction>> union_labeling_witness(const std::vector<Point>& pts,
                                                                         std::uint32_t positives, std::size_t k,
                                                                         std::uint64_t* lp_calls = nullptr) {
  std::uint64_t local = 0;
  std::uint64_t& calls = lp_calls ? *lp_calls : local;
  const std::size_t n = pts.size();
  if (n > 31) throw std::invalid_argument("union search supports at most 31 points");
  const std::uint32_t all = n == 0 ? 0 : (std::uint32_t{1} << n) - 1;
  const std::uint32_t negatives = all & ~positives;
  const std::size_t d = pts.empty() ? 0 : pts.front().size();
  if (positives == 0) return std::vector<AffineFunction>{AffineFunction{std::vector<double>(d, 0.0), -1.0}};
  if (k == 0) return std::nullopt;

  // Good groups (separable from all negatives) are closed under subsets, so
  // only maximal ones are needed; enumerate submasks of `positives`.
  std::vector<std::uint32_t> members;
  for (std::size_t i = 0; i < n; ++i)
    if (positives >> i & 1U) members.push_back(std::uint32_t{1} << i);
  std::map<std::uint32_t, AffineFunction> good;
  std::vector<std::uint32_t> bad;
  const std::uint32_t n_sub = std::uint32_t{1} << members.size();
  std::vector<std::uint32_t> order;
  for (std::uint32_t s = 1; s < n_sub; ++s) order.push_back(s);
  std::stable_sort(order.begin(), order.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
  for (std::uint32_t s : order) {
    std::uint32_t group = 0;
    for (std::size_t j = 0; j < members.size(); ++j)
      if (s >> j & 1U) group |= members[j];
    if (std::ranges::any_of(bad, [&](std::uint32_t b) { return (group & b) == b; })) continue;
    if (auto f = detail::separate_masks(pts, group, negatives, calls)) good.emplace(group, *f);
    else bad.push_back(group);
  }
  std::vector<std::uint32_t> maximal;
  for (const auto& [g, f] : good) {
    bool dominated = false;
    for (const auto& [h, f2] : good)
      if (h != g && (g & h) == g) {
        dominated = true;
        break;
      }
    if (!dominated) maximal.push_back(g);
  }
  // Cover the positives by at most k maximal groups.
  std::vector<std::uint32_t> chosen;
  auto cover = [&](auto&& self, std::uint32_t covered) -> bool {
    if ((covered & positives) == positives) return true;
    if (chosen.size() == k) return false;
    const std::uint32_t missing = positives & ~covered;
    const std::uint32_t lowest = missing & (~missing + 1);
    for (std::uint32_t g : maximal) {
      if (!(g & lowest)) continue;
      chosen.push_back(g);
      if (self(self, covered | g)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (!cover(cover, 0)) return std::nullopt;
  std::vector<AffineFunction> out;
  for (std::uint32_t g : chosen) out.push_back(good.at(g));
  return out;
}

/// Every labeling of `pts` is a union of at most k halfspaces.
inline bool union_shatters(const std::vector<Point>& pts, std::size_t k, std::uint64_t* lp_calls = nullptr) {
  const std::uint32_t n_labelings = std::uint32_t{1} << pts.size();
  for (std::uint32_t y = 0; y < n_labelings; ++y)
    if (!union_labeling_witness(pts, y, k, lp_calls)) return false;
  return true;
}

/// Candidate point configurations of size m in the unit ball of R^d:
/// structured ones first (moment curve, circle, spread grid), then random.
inline std::vector<std::vector<Point>> candidate_configurations(std::size_t d, std::size_t m, std::size_t n_random,
                                                                std::uint64_t seed) {
  std::vector<std::vector<Point>> configs;
  // Moment curve (t, t^2, ..., t^d) on t in [-1, 1], scaled into the ball.
  {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < m; ++i) {
      const double t = m == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(m - 1);
      Point p(d);
      double v = 1.0;
      for (std::size_t j = 0; j < d; ++j) p[j] = (v *= t);
      pts.push_back(std::move(p));
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (auto& p : pts)
      for (double& v : p) v *= scale;
    configs.push_back(std::move(pts));
  }
  if (d >= 2) {
    // Regular m-gon on the unit circle of the first two coordinates.
    std::vector<Point> pts;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
      Point p(d, 0.0);
      p[0] = std::cos(a);
      p[1] = std::sin(a);
      pts.push_back(std::move(p));
    }
    configs.push_back(std::move(pts));
  }
  for (std::size_t j = 0; j < n_random; ++j)
    configs.push_back(sample_ball_points(m, d, Rng::derive(seed, m * 100003 + j)));
  return configs;
}

struct UnionSearchResult {
  std::size_t best = 0;
  std::vector<Point> witness;
  bool exhausted = false;  // budget ran out; `best` is a lower bound
  std::uint64_t configurations = 0;
  std::uint64_t lp_calls = 0;
};

/// Grows the set size m = 1, 2, ... and, at each size, tries the candidate
/// configurations until one is shattered by unions of k halfspaces. Stops at
/// the first size where no candidate succeeds, at m_max, or when `budget`
/// configurations have been tried.
inline UnionSearchResult halfspace_union_shatter_search(std::size_t d, std::size_t k, std::size_t m_max,
                                                        std::uint64_t budget, std::uint64_t seed,
                                                        std::size_t random_per_size = 24) {
  if (d < 1 || k < 1) throw std::invalid_argument("union search needs d >= 1 and k >= 1");
  if (m_max > 10) throw std::invalid_argument("union search is capped at m_max <= 10");
  UnionSearchResult result;
  for (std::size_t m = 1; m <= m_max; ++m) {
    bool found = false;
    for (const auto& config : candidate_configurations(d, m, random_per_size, seed)) {
      if (result.configurations >= budget) {
        result.exhausted = true;
        return result;
      }
      ++result.configurations;
      if (union_shatters(config, k, &result.lp_calls)) {
        result.best = m;
        result.witness = config;
        found = true;
        break;
      }
    }
    if (!found) break;
  }
  return result;
}

struct UnionCertificate {
  SampledClass cls;  // rows: g_y restricted to the witness points
  ShatterCertificate certificate;
};

/// Converts a union-shattered point set into a zero-shift gamma-shattering
/// certificate for the k-fold max of affine functions: for each labeling y,
/// g_y = c max_j f_j with the union witnesses f_j, scaled so the margin is 2 gamma.
inline UnionCertificate union_witness_certificate(const std::vector<Point>& pts, std::size_t k, double gamma) {
  const std::size_t m = pts.size();
  const std::size_t n_patterns = std::size_t{1} << m;
  std::vector<std::vector<double>> rows;
  for (std::size_t y = 0; y < n_patterns; ++y) {
    auto fs = union_labeling_witness(pts, static_cast<std::uint32_t>(y), k);
    if (!fs) throw std::invalid_argument("points are not shattered by unions of k halfspaces");
    while (fs->size() < k) fs->push_back(fs->front());
    std::vector<double> vals;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      double v = -std::numeric_limits<double>::infinity();
      for (const auto& f : *fs) v = std::max(v, f(pts[i]));
      vals.push_back(v);
      margin = std::min(margin, pattern_sign(static_cast<Pattern>(y), i) * v);
    }
    if (!(margin > 0.0)) throw std::runtime_error("union witness has no positive margin");
    for (double& v : vals) v *= 2 * gamma / margin;
    rows.push_back(std::move(vals));
  }
  UnionCertificate out{SampledClass(default_labels(m), rows, {{"family", "affine-union-witness"}}), {}};
  out.certificate.subset.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.certificate.subset[i] = i;
  out.certificate.shift.assign(m, 0.0);
  out.certificate.gamma = gamma;
  out.certificate.witnesses.resize(n_patterns);
  for (std::size_t y = 0; y < n_patterns; ++y) out.certificate.witnesses[y] = y;
  return out;
}

}  // namespace fatmax

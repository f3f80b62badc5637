#pragma once

// L_p(mu) distances between rows of a finite class, proper covering numbers
// (exact by branch and bound, or farthest-point greedy), the product bound for
// covers of a k-fold maximum, and Maurey-type nets for absolute convex hulls.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fatmax/compose.hpp"
#include "fatmax/core.hpp"
#include "fatmax/rng.hpp"

namespace fatmax {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct MetricSpec {
  double p = 2.0;  // kInfinity selects the sup norm over the support of mu
  Measure measure;

  MetricSpec(double p_, Measure m) : p(p_), measure(std::move(m)) {
    if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  }

  static MetricSpec uniform(double p, std::size_t n) { return MetricSpec(p, Measure::uniform(n)); }
  bool is_sup() const { return std::isinf(p); }
};

inline std::string format_p(double p) { return std::isinf(p) ? "inf" : std::to_string(p); }

/// Weighted p-norm of f - g.
inline double lp_distance(std::span<const double> f, std::span<const double> g, const MetricSpec& m) {
  if (f.size() != g.size() || f.size() != m.measure.size())
    throw std::invalid_argument("lp_distance: length mismatch");
  if (m.is_sup()) {
    double d = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (m.measure[i] > 0.0) d = std::max(d, std::abs(f[i] - g[i]));
    return d;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += m.measure[i] * std::pow(std::abs(f[i] - g[i]), m.p);
  return std::pow(acc, 1.0 / m.p);
}

// Distances are compared with a relative slack so that radii computed as
// t / k^(1/p) are not lost to rounding.
inline bool within_radius(double d, double t) { return d <= t + 1e-12 * std::max(1.0, t); }

enum class CoverMethod { exact, greedy };

struct CoverReport {
  double radius = 0.0;
  double p = 2.0;
  std::vector<double> weights;
  std::vector<Index> members;  // row indices of the class, ascending
  bool exact = false;

  std::size_t size() const { return members.size(); }
};

struct CoverLimits {
  std::size_t max_rows = 20;
  std::uint64_t node_budget = 50'000'000;
};

inline std::vector<std::vector<double>> distance_matrix(const SampledClass& F, const MetricSpec& m) {
  std::vector<std::vector<double>> d(F.rows(), std::vector<double>(F.rows(), 0.0));
  for (Index a = 0; a < F.rows(); ++a)
    for (Index b = a + 1; b < F.rows(); ++b) d[a][b] = d[b][a] = lp_distance(F.row(a), F.row(b), m);
  return d;
}

/// True iff every row of F lies within t of some member.
inline bool is_cover(const SampledClass& F, std::span<const Index> members, const MetricSpec& m, double t) {
  for (Index f = 0; f < F.rows(); ++f) {
    bool covered = false;
    for (Index c : members) {
      if (within_radius(lp_distance(F.row(f), F.row(c), m), t)) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

namespace detail {

inline std::vector<Index> farthest_point_cover(const std::vector<std::vector<double>>& dist, double t) {
  const std::size_t n = dist.size();
  std::vector<Index> centers{0};
  std::vector<double> nearest = dist[0];
  while (true) {
    Index far = 0;
    for (Index i = 1; i < n; ++i)
      if (nearest[i] > nearest[far]) far = i;
    if (within_radius(nearest[far], t)) break;
    centers.push_back(far);
    for (Index i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], dist[far][i]);
  }
  std::sort(centers.begin(), centers.end());
  return centers;
}

// Minimum set cover of `universe` elements by `balls` (bitmasks), branch and
// bound seeded with `incumbent`.
inline std::vector<Index> min_set_cover(const std::vector<std::uint64_t>& balls, std::size_t universe,
                                        std::vector<Index> incumbent, std::uint64_t node_budget) {
  const std::uint64_t all = universe == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << universe) - 1;
  std::size_t widest = 0;
  for (auto b : balls) widest = std::max<std::size_t>(widest, std::popcount(b));
  std::vector<Index> chosen;
  std::uint64_t nodes = 0;

  auto recurse = [&](auto&& self, std::uint64_t covered) -> void {
    if (++nodes > node_budget) throw BudgetExceeded("exact cover node budget exhausted");
    if (covered == all) {
      if (chosen.size() < incumbent.size()) incumbent = chosen;
      return;
    }
    const auto missing = static_cast<std::size_t>(std::popcount(all & ~covered));
    if (chosen.size() + (missing + widest - 1) / widest >= incumbent.size()) return;
    // Branch on the uncovered element with the fewest covering balls.
    std::size_t pick = universe, pick_count = SIZE_MAX;
    for (std::size_t e = 0; e < universe; ++e) {
      if (covered >> e & 1U) continue;
      std::size_t count = 0;
      for (auto b : balls) count += b >> e & 1U;
      if (count < pick_count) {
        pick = e;
        pick_count = count;
      }
    }
    std::vector<Index> options;
    for (Index c = 0; c < balls.size(); ++c)
      if (balls[c] >> pick & 1U) options.push_back(c);
    std::stable_sort(options.begin(), options.end(), [&](Index a, Index b) {
      return std::popcount(balls[a] & ~covered) > std::popcount(balls[b] & ~covered);
    });
    for (Index c : options) {
      chosen.push_back(c);
      self(self, covered | balls[c]);
      chosen.pop_back();
    }
  };
  recurse(recurse, 0);
  std::sort(incumbent.begin(), incumbent.end());
  return incumbent;
}

}  // namespace detail

/// Proper t-cover of F (centers are rows of F). `exact` returns a minimum
/// cover; `greedy` runs farthest-point-first, whose size is never below it.
inline CoverReport covering_number(const SampledClass& F, const MetricSpec& m, double t, CoverMethod method,
                                   const CoverLimits& limits = {}) {
  if (!(t >= 0.0)) throw std::invalid_argument("cover radius must be nonnegative");
  if (m.measure.size() != F.cols()) throw std::invalid_argument("measure size must match the domain");
  const auto dist = distance_matrix(F, m);
  CoverReport report{t, m.p, m.measure.weights(), detail::farthest_point_cover(dist, t), false};
  if (method == CoverMethod::greedy) return report;
  if (F.rows() > limits.max_rows || F.rows() > 64)
    throw BudgetExceeded("class has " + std::to_string(F.rows()) + " rows; exact cover limit is " +
                         std::to_string(limits.max_rows));
  std::vector<std::uint64_t> balls(F.rows(), 0);
  for (Index c = 0; c < F.rows(); ++c)
    for (Index f = 0; f < F.rows(); ++f)
      if (within_radius(dist[c][f], t)) balls[c] |= std::uint64_t{1} << f;
  report.members = detail::min_set_cover(balls, F.rows(), report.members, limits.node_budget);
  report.exact = true;
  return report;
}

/// Minimum t-cover of F using centers drawn from an arbitrary candidate set
/// (improper covers). Returns indices into `centers`.
inline std::vector<Index> improper_cover(const SampledClass& F, const SampledClass& centers, const MetricSpec& m,
                                         double t, const CoverLimits& limits = {}) {
  if (centers.cols() != F.cols()) throw std::invalid_argument("centers must live on the class domain");
  if (F.rows() > 64) throw BudgetExceeded("improper cover supports at most 64 rows");
  std::vector<std::uint64_t> balls(centers.rows(), 0);
  std::uint64_t reach = 0;
  for (Index c = 0; c < centers.rows(); ++c) {
    for (Index f = 0; f < F.rows(); ++f)
      if (within_radius(lp_distance(centers.row(c), F.row(f), m), t)) balls[c] |= std::uint64_t{1} << f;
    reach |= balls[c];
  }
  const std::uint64_t all = F.rows() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << F.rows()) - 1;
  if (reach != all) throw std::invalid_argument("candidate centers cannot cover every row at this radius");
  std::vector<Index> incumbent(centers.rows());
  std::iota(incumbent.begin(), incumbent.end(), Index{0});
  return detail::min_set_cover(balls, F.rows(), incumbent, limits.node_budget);
}

struct ProductBoundReport {
  std::size_t lhs = 0;                // N(F_max, t)
  std::vector<std::size_t> factors;   // N(F_i, t / k^(1/p)), or N(F_i, t) for p = inf
  double component_radius = 0.0;
  double rhs = 1.0;
  bool holds = false;
};

/// Exact check of N(F_max, L_p, t) <= prod_i N(F_i, L_p, t / k^(1/p)).
/// F_max is deduplicated first; duplicates never change a covering number.
inline ProductBoundReport verify_product_bound(std::span<const SampledClass> classes, const MetricSpec& m, double t,
                                               const CoverLimits& limits = {}) {
  const double k = static_cast<double>(classes.size());
  ProductBoundReport r;
  r.component_radius = m.is_sup() ? t : t / std::pow(k, 1.0 / m.p);
  for (const auto& c : classes) {
    r.factors.push_back(covering_number(dedup_rows(c), m, r.component_radius, CoverMethod::exact, limits).size());
    r.rhs *= static_cast<double>(r.factors.back());
  }
  const SampledClass fmax = dedup_rows(k_fold_max(classes));
  r.lhs = covering_number(fmax, m, t, CoverMethod::exact, limits).size();
  r.holds = static_cast<double>(r.lhs) <= r.rhs;
  return r;
}

struct PairInequalityReport {
  std::size_t samples = 0;
  // Largest lhs - rhs seen; <= 0 means no violation.
  double max_violation_p1 = -kInfinity;
  double max_violation_p2 = -kInfinity;
  double max_violation_p3 = -kInfinity;
  double max_violation_sup = -kInfinity;

  double worst() const {
    return std::max({max_violation_p1, max_violation_p2, max_violation_p3, max_violation_sup});
  }
};

/// |a v b - c v d|^p <= |a-c|^p + |b-d|^p for p in {1,2,3}, and
/// |a v b - c v d| <= |a-c| v |b-d|, on random quadruples.
inline PairInequalityReport check_max_pair_inequalities(std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  PairInequalityReport rep;
  rep.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    double q[4];
    for (double& v : q) {
      // Mix of continuous values and small integers so ties occur.
      v = rng.coin() ? rng.uniform(-5.0, 5.0) : static_cast<double>(rng.uniform_int(-3, 3));
    }
    const double a = q[0], b = q[1], c = q[2], d = q[3];
    const double lhs = std::abs(std::max(a, b) - std::max(c, d));
    const double u = std::abs(a - c), v = std::abs(b - d);
    auto viol = [&](double p) { return std::pow(lhs, p) - (std::pow(u, p) + std::pow(v, p)); };
    rep.max_violation_p1 = std::max(rep.max_violation_p1, viol(1.0));
    rep.max_violation_p2 = std::max(rep.max_violation_p2, viol(2.0));
    rep.max_violation_p3 = std::max(rep.max_violation_p3, viol(3.0));
    rep.max_violation_sup = std::max(rep.max_violation_sup, lhs - std::max(u, v));
  }
  return rep;
}

struct TupleInequalityReport {
  std::size_t samples = 0;
  double max_violation = -kInfinity;
};

/// Distance between two pointwise maxima against the per-component
/// distances: (sum d_i^p)^(1/p) for finite p, max_i d_i for p = inf. Random
/// k-tuples of rows on random domains and measures.
inline TupleInequalityReport check_max_tuple_inequalities(std::size_t samples, std::uint64_t seed,
                                                          std::size_t max_k = 4, std::size_t max_points = 6) {
  Rng rng(seed);
  TupleInequalityReport rep;
  rep.samples = samples;
  const double ps[] = {1.0, 2.0, 3.0, kInfinity};
  for (std::size_t s = 0; s < samples; ++s) {
    const auto k = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_k)));
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_points)));
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) total += (x = rng.uniform(0.05, 1.0));
    for (double& x : w) x /= total;
    w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    const MetricSpec base(1.0, Measure(w));
    std::vector<std::vector<double>> f(k, std::vector<double>(n)), g(k, std::vector<double>(n));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t x = 0; x < n; ++x) {
        f[i][x] = rng.uniform(-3.0, 3.0);
        g[i][x] = rng.uniform(-3.0, 3.0);
      }
    std::vector<double> fmax(n, -kInfinity), gmax(n, -kInfinity);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t x = 0; x < n; ++x) {
        fmax[x] = std::max(fmax[x], f[i][x]);
        gmax[x] = std::max(gmax[x], g[i][x]);
      }
    for (double p : ps) {
      const MetricSpec m(p, base.measure);
      const double lhs = lp_distance(fmax, gmax, m);
      double rhs = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double d = lp_distance(f[i], g[i], m);
        rhs = m.is_sup() ? std::max(rhs, d) : rhs + std::pow(d, p);
      }
      if (!m.is_sup()) rhs = std::pow(rhs, 1.0 / p);
      rep.max_violation = std::max(rep.max_violation, lhs - rhs);
    }
  }
  return rep;
}

struct MaureyLimits {
  std::size_t max_terms = 4;
  std::size_t max_vectors = 25;
};

struct MaureyNet {
  std::vector<std::vector<double>> points;
  std::size_t terms = 0;      // s = ceil(r^2 / t^2); 0 when the net is {0}
  double size_bound = 0.0;    // (c + c m t^2 / r^2)^ceil(r^2 / t^2)
  std::size_t dimension = 0;  // m = |X|
};

/// Size bound for a t-net of absconv(rX) under the Euclidean norm, |X| = m.
inline double maurey_size_bound(std::size_t m, double r, double t, double c = 3.0) {
  const double ratio = r * r / (t * t);
  const double s = std::ceil(ratio - 1e-12);
  return std::pow(c + c * static_cast<double>(m) * t * t / (r * r), s);
}

/// t-net for absconv(rX), X in the unit ball: all averages
/// (r/s) sum_{j<=s} z_j with z_j drawn (with repetition) from {0} and +-X,
/// s = ceil(r^2/t^2). Any target r sum a_i x_i with sum |a_i| <= 1 is the mean
/// of a random z with E||z||^2 <= r^2, so some s-average lies within t.
inline MaureyNet maurey_cover(const std::vector<std::vector<double>>& X, double r, double t, double c = 3.0,
                              const MaureyLimits& limits = {}) {
  if (X.empty()) throw std::invalid_argument("maurey_cover needs at least one vector");
  if (!(t > 0.0) || !(r > 0.0)) throw std::invalid_argument("maurey_cover needs r > 0 and t > 0");
  const std::size_t dim = X.front().size();
  double radius = 0.0;
  for (const auto& x : X) {
    if (x.size() != dim) throw std::invalid_argument("maurey_cover: vectors differ in dimension");
    double sq = 0.0;
    for (double v : x) sq += v * v;
    if (std::sqrt(sq) > 1.0 + 1e-12) throw std::invalid_argument("maurey_cover: vectors must lie in the unit ball");
    radius = std::max(radius, std::sqrt(sq));
  }
  if (X.size() > limits.max_vectors) throw BudgetExceeded("maurey_cover: too many vectors");

  MaureyNet net;
  net.dimension = X.size();
  net.size_bound = maurey_size_bound(X.size(), r, t, c);
  if (r * radius <= t) {
    // The whole hull sits in the t-ball around the origin.
    net.points.assign(1, std::vector<double>(dim, 0.0));
    return net;
  }
  const auto s = static_cast<std::size_t>(std::ceil(r * r / (t * t) - 1e-12));
  if (s > limits.max_terms) throw BudgetExceeded("maurey_cover: " + std::to_string(s) + " terms exceeds limit");
  net.terms = s;

  // Atoms: 0, +x_1, -x_1, +x_2, ...
  std::vector<std::vector<double>> atoms{std::vector<double>(dim, 0.0)};
  for (const auto& x : X) {
    atoms.push_back(x);
    std::vector<double> neg(x);
    for (double& v : neg) v = -v;
    atoms.push_back(std::move(neg));
  }
  std::set<std::vector<double>> unique;
  std::vector<std::size_t> pick(s, 0);  // nondecreasing atom indices = multiset
  while (true) {
    std::vector<double> sum(dim, 0.0);
    for (std::size_t a : pick)
      for (std::size_t i = 0; i < dim; ++i) sum[i] += atoms[a][i];
    for (double& v : sum) v *= r / static_cast<double>(s);
    unique.insert(std::move(sum));
    std::size_t j = s;
    while (j > 0 && pick[j - 1] == atoms.size() - 1) --j;
    if (j == 0) break;
    ++pick[j - 1];
    for (std::size_t l = j; l < s; ++l) pick[l] = pick[j - 1];
  }
  net.points.assign(unique.begin(), unique.end());
  return net;
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sq);
}

inline double distance_to_net(const MaureyNet& net, std::span<const double> z) {
  double best = kInfinity;
  for (const auto& p : net.points) best = std::min(best, euclidean_distance(p, z));
  return best;
}

}  // namespace fatmax

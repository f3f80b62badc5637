#pragma once

// Exact fat-shattering, zero-shift fat-shattering and VC dimensions of finite
// classes, each with a checkable shattering certificate.
//
// Subsets are explored level by level (Apriori style): a set can only be
// shattered if all of its one-smaller subsets are, so level m+1 candidates are
// joined from shattered level-m sets. The largest nonempty level is the
// dimension; its lexicographically smallest member is reported.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fatmax/core.hpp"

namespace fatmax {

enum class ShiftMode { shifted, zero };

// Sign pattern over an ordered subset: bit i set means y_i = +1.
using Pattern = std::uint32_t;

inline int pattern_sign(Pattern y, std::size_t i) { return ((y >> i) & 1U) ? +1 : -1; }

inline std::string pattern_string(Pattern y, std::size_t m) {
  std::string s;
  for (std::size_t i = 0; i < m; ++i) s.push_back(pattern_sign(y, i) > 0 ? '+' : '-');
  return s;
}

inline Pattern parse_pattern(const std::string& s) {
  Pattern y = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') y |= Pattern{1} << i;
    else if (s[i] != '-') throw SchemaError("pattern must consist of '+' and '-'");
  }
  return y;
}

/// Witness structure for a shattering claim. `witnesses[y]` is the row that
/// realizes sign pattern y; for VC certificates bit i set means label 1.
struct ShatterCertificate {
  IndexSet subset;
  std::vector<double> shift;
  std::vector<Index> witnesses;
  double gamma = 0.0;

  std::size_t size() const { return subset.size(); }
};

struct SearchStats {
  std::uint64_t subsets_examined = 0;
  std::uint64_t nodes = 0;
  std::uint64_t prunes = 0;
};

struct SearchLimits {
  std::size_t max_domain = 20;
  std::size_t max_subset = 24;
  std::uint64_t node_budget = 200'000'000;
};

struct DimResult {
  std::size_t dimension = 0;
  std::optional<ShatterCertificate> certificate;
  SearchStats stats;
  // False when a budget was hit; `dimension` is then a certified lower bound.
  bool exact = true;
};

namespace detail {

inline constexpr std::size_t kMaxPatternBits = 24;

inline std::size_t pattern_count(std::size_t m) {
  if (m > kMaxPatternBits) throw std::invalid_argument("subset too large for pattern enumeration");
  return std::size_t{1} << m;
}

// Tracks node usage across the calls of one search.
struct Budget {
  std::uint64_t limit;
  SearchStats* stats;
  bool exhausted = false;

  bool charge() {
    ++stats->nodes;
    if (stats->nodes > limit) exhausted = true;
    return !exhausted;
  }
};

// Rows of F projected onto `subset`, duplicates removed; `origin[j]` is the
// first row of F with projection j.
struct Projection {
  std::vector<std::vector<double>> rows;
  std::vector<Index> origin;
};

inline Projection project_distinct(const SampledClass& F, const IndexSet& subset) {
  Projection p;
  std::map<std::vector<double>, Index> seen;
  for (Index f = 0; f < F.rows(); ++f) {
    std::vector<double> r;
    r.reserve(subset.size());
    for (Index i : subset) r.push_back(F.at(f, i));
    if (seen.emplace(r, p.rows.size()).second) {
      p.rows.push_back(std::move(r));
      p.origin.push_back(f);
    }
  }
  return p;
}

// Backtracking over witness assignments for the gap reformulation: with
// lo_i = min of +witness values and hi_i = max of -witness values at point i,
// S is shattered iff some assignment keeps lo_i >= hi_i + 2 gamma everywhere.
class GapSearch {
 public:
  GapSearch(const Projection& proj, double gamma, Budget& budget)
      : proj_(proj), gamma_(gamma), budget_(budget), m_(proj.rows.empty() ? 0 : proj.rows[0].size()) {}

  std::optional<ShatterCertificate> run(const IndexSet& subset) {
    const std::size_t n_patterns = pattern_count(m_);
    std::vector<double> col_min(m_, std::numeric_limits<double>::infinity());
    std::vector<double> col_max(m_, -std::numeric_limits<double>::infinity());
    for (const auto& r : proj_.rows)
      for (std::size_t i = 0; i < m_; ++i) {
        col_min[i] = std::min(col_min[i], r[i]);
        col_max[i] = std::max(col_max[i], r[i]);
      }
    for (std::size_t i = 0; i < m_; ++i)
      if (col_max[i] - col_min[i] < 2 * gamma_) return std::nullopt;

    // Gray-code pattern order; a static filter keeps only rows that can
    // possibly serve each pattern against the column extremes.
    order_.resize(n_patterns);
    candidates_.assign(n_patterns, {});
    for (std::size_t j = 0; j < n_patterns; ++j) {
      const auto y = static_cast<Pattern>(j ^ (j >> 1));
      order_[j] = y;
      for (std::size_t r = 0; r < proj_.rows.size(); ++r) {
        bool ok = true;
        for (std::size_t i = 0; i < m_ && ok; ++i) {
          const double v = proj_.rows[r][i];
          ok = pattern_sign(y, i) > 0 ? v >= col_min[i] + 2 * gamma_ : v <= col_max[i] - 2 * gamma_;
        }
        if (ok) candidates_[y].push_back(r);
      }
      if (candidates_[y].empty()) return std::nullopt;
    }
    // Most constrained patterns first, Gray order breaking ties.
    std::stable_sort(order_.begin(), order_.end(), [&](Pattern a, Pattern b) {
      return candidates_[a].size() < candidates_[b].size();
    });

    lo_.assign(m_, std::numeric_limits<double>::infinity());
    hi_.assign(m_, -std::numeric_limits<double>::infinity());
    choice_.assign(n_patterns, 0);
    if (!assign(0)) return std::nullopt;

    ShatterCertificate cert;
    cert.subset = subset;
    cert.gamma = gamma_;
    cert.shift.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) cert.shift[i] = (lo_[i] + hi_[i]) / 2;
    cert.witnesses.resize(n_patterns);
    for (std::size_t y = 0; y < n_patterns; ++y) cert.witnesses[y] = proj_.origin[choice_[y]];
    return cert;
  }

 private:
  bool assign(std::size_t depth) {
    if (depth == order_.size()) return true;
    if (!budget_.charge()) return false;
    const Pattern y = order_[depth];
    for (std::size_t r : candidates_[y]) {
      const auto& row = proj_.rows[r];
      bool ok = true;
      for (std::size_t i = 0; i < m_ && ok; ++i) {
        if (pattern_sign(y, i) > 0)
          ok = std::min(lo_[i], row[i]) >= hi_[i] + 2 * gamma_;
        else
          ok = lo_[i] >= std::max(hi_[i], row[i]) + 2 * gamma_;
      }
      if (!ok) {
        ++budget_.stats->prunes;
        continue;
      }
      const std::vector<double> saved_lo = lo_, saved_hi = hi_;
      for (std::size_t i = 0; i < m_; ++i) {
        if (pattern_sign(y, i) > 0) lo_[i] = std::min(lo_[i], row[i]);
        else hi_[i] = std::max(hi_[i], row[i]);
      }
      choice_[y] = r;
      if (assign(depth + 1)) return true;
      lo_ = saved_lo;
      hi_ = saved_hi;
      if (budget_.exhausted) return false;
    }
    return false;
  }

  const Projection& proj_;
  double gamma_;
  Budget& budget_;
  std::size_t m_;
  std::vector<Pattern> order_;
  std::vector<std::vector<std::size_t>> candidates_;
  std::vector<double> lo_, hi_;
  std::vector<std::size_t> choice_;
};

// Zero-shift decision: each pattern needs its own row with y_i f(x_i) >= gamma.
inline std::optional<ShatterCertificate> zero_shatter(const SampledClass& F, const IndexSet& subset,
                                                      double gamma, Budget& budget) {
  const std::size_t m = subset.size();
  const std::size_t n_patterns = pattern_count(m);
  std::vector<std::optional<Index>> witness(n_patterns);
  std::size_t found = 0;
  for (Index f = 0; f < F.rows() && found < n_patterns; ++f) {
    budget.charge();
    Pattern y = 0;
    bool decided = true;
    for (std::size_t i = 0; i < m && decided; ++i) {
      const double v = F.at(f, subset[i]);
      if (v >= gamma) y |= Pattern{1} << i;
      else if (!(v <= -gamma)) decided = false;
    }
    if (decided && !witness[y]) {
      witness[y] = f;
      ++found;
    }
  }
  if (found < n_patterns) return std::nullopt;
  ShatterCertificate cert;
  cert.subset = subset;
  cert.gamma = gamma;
  cert.shift.assign(m, 0.0);
  for (const auto& w : witness) cert.witnesses.push_back(*w);
  return cert;
}

// Level-wise search over subsets of the candidate points. `decide(S)` reports
// whether S is shattered; `bound` caps the size that can possibly succeed.
template <class Decide>
DimResult levelwise_search(const IndexSet& singles, std::size_t bound, const SearchLimits& limits,
                           Decide decide) {
  DimResult result;
  Budget budget{limits.node_budget, &result.stats};
  const std::size_t cap = std::min({bound, limits.max_subset, kMaxPatternBits});

  std::vector<IndexSet> level;
  for (Index x : singles) {
    if (cap == 0) break;
    ++result.stats.subsets_examined;
    if (decide(IndexSet{x}, budget)) level.push_back({x});
    if (budget.exhausted) break;
  }
  std::vector<IndexSet> best = level;
  std::size_t size = level.empty() ? 0 : 1;

  while (!budget.exhausted && !level.empty() && size < cap) {
    std::set<IndexSet> known(level.begin(), level.end());
    std::vector<IndexSet> next;
    for (std::size_t a = 0; a < level.size() && !budget.exhausted; ++a) {
      for (std::size_t b = a + 1; b < level.size(); ++b) {
        if (!std::equal(level[a].begin(), level[a].end() - 1, level[b].begin())) break;
        IndexSet cand = level[a];
        cand.push_back(level[b].back());
        bool all_subsets = true;
        for (std::size_t drop = 0; drop + 2 < cand.size() && all_subsets; ++drop) {
          IndexSet sub;
          for (std::size_t j = 0; j < cand.size(); ++j)
            if (j != drop) sub.push_back(cand[j]);
          all_subsets = known.count(sub) > 0;
        }
        if (!all_subsets) {
          ++result.stats.prunes;
          continue;
        }
        ++result.stats.subsets_examined;
        if (decide(cand, budget)) next.push_back(std::move(cand));
        if (budget.exhausted) break;
      }
    }
    if (next.empty()) break;
    level = std::move(next);
    best = level;
    ++size;
  }
  if (budget.exhausted) result.exact = false;
  if (size == limits.max_subset && size < bound && !level.empty()) result.exact = false;
  result.dimension = size;
  if (size > 0) {
    // Level sets are generated in lexicographic order.
    result.certificate = ShatterCertificate{best.front(), {}, {}, 0.0};
  }
  return result;
}

inline std::size_t log2_floor(std::size_t n) {
  return n == 0 ? 0 : static_cast<std::size_t>(std::bit_width(n) - 1);
}

inline void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
}

}  // namespace detail

/// Checks y_i (f_y(x_i) - r_i) >= gamma for every pattern and point of the
/// certificate. Throws if the witness map is incomplete or out of range.
inline bool check_certificate(const SampledClass& F, const ShatterCertificate& cert, ShiftMode mode) {
  const std::size_t m = cert.subset.size();
  check_subset(cert.subset, F.cols());
  if (cert.witnesses.size() != detail::pattern_count(m))
    throw std::invalid_argument("certificate is missing sign patterns");
  if (cert.shift.size() != m) throw std::invalid_argument("certificate shift has wrong length");
  if (mode == ShiftMode::zero &&
      std::ranges::any_of(cert.shift, [](double r) { return r != 0.0; }))
    throw std::invalid_argument("zero-shift certificate must have r = 0");
  for (std::size_t y = 0; y < cert.witnesses.size(); ++y) {
    const Index f = cert.witnesses[y];
    if (f >= F.rows()) throw std::out_of_range("certificate witness row out of range");
    for (std::size_t i = 0; i < m; ++i) {
      const double margin = pattern_sign(static_cast<Pattern>(y), i) * (F.at(f, cert.subset[i]) - cert.shift[i]);
      if (!(margin >= cert.gamma)) return false;
    }
  }
  return true;
}

/// Checks that every labeling of the certificate's subset is realized
/// (bit i of the pattern index = label at subset[i]) by its witness row.
inline bool check_vc_certificate(const PartialClass& P, const ShatterCertificate& cert) {
  const std::size_t m = cert.subset.size();
  check_subset(cert.subset, P.cols());
  if (cert.witnesses.size() != detail::pattern_count(m))
    throw std::invalid_argument("certificate is missing labelings");
  for (std::size_t y = 0; y < cert.witnesses.size(); ++y) {
    const Index f = cert.witnesses[y];
    if (f >= P.rows()) throw std::out_of_range("certificate witness row out of range");
    for (std::size_t i = 0; i < m; ++i) {
      const Label want = ((y >> i) & 1U) ? Label::one : Label::zero;
      if (P.at(f, cert.subset[i]) != want) return false;
    }
  }
  return true;
}

/// Decides whether F gamma-shatters `subset` and returns a certificate if so.
/// In shifted mode the shift is the midpoint of each column's witness gap.
inline std::optional<ShatterCertificate> shatter_decision(const SampledClass& F, const IndexSet& subset,
                                                          double gamma, ShiftMode mode,
                                                          SearchStats* stats = nullptr,
                                                          std::uint64_t node_budget = 200'000'000) {
  detail::check_gamma(gamma);
  check_subset(subset, F.cols());
  SearchStats local;
  detail::Budget budget{node_budget, stats ? stats : &local};
  if (mode == ShiftMode::zero) return detail::zero_shatter(F, subset, gamma, budget);
  const auto proj = detail::project_distinct(F, subset);
  return detail::GapSearch(proj, gamma, budget).run(subset);
}

namespace detail {

inline DimResult margin_dim(const SampledClass& F, double gamma, ShiftMode mode,
                            const SearchLimits& limits) {
  check_gamma(gamma);
  if (F.cols() > limits.max_domain)
    throw std::invalid_argument("domain has " + std::to_string(F.cols()) +
                                " points, exact search limit is " + std::to_string(limits.max_domain));
  // Per-point necessary condition: both signs must be reachable at margin gamma.
  IndexSet singles;
  for (Index x = 0; x < F.cols(); ++x) {
    double lo = F.at(0, x), hi = F.at(0, x);
    for (Index f = 1; f < F.rows(); ++f) {
      lo = std::min(lo, F.at(f, x));
      hi = std::max(hi, F.at(f, x));
    }
    const bool ok = mode == ShiftMode::shifted ? hi - lo >= 2 * gamma : (hi >= gamma && lo <= -gamma);
    if (ok) singles.push_back(x);
  }
  const std::size_t bound = log2_floor(dedup_rows(F).rows());
  auto decide = [&](const IndexSet& s, Budget& budget) {
    if (mode == ShiftMode::zero) return zero_shatter(F, s, gamma, budget).has_value();
    const auto proj = project_distinct(F, s);
    return GapSearch(proj, gamma, budget).run(s).has_value();
  };
  DimResult result = levelwise_search(singles, bound, limits, decide);
  if (result.certificate) {
    SearchStats scratch;
    Budget unlimited{std::numeric_limits<std::uint64_t>::max(), &scratch};
    const auto& s = result.certificate->subset;
    result.certificate = mode == ShiftMode::zero
                             ? zero_shatter(F, s, gamma, unlimited)
                             : GapSearch(project_distinct(F, s), gamma, unlimited).run(s);
  }
  return result;
}

}  // namespace detail

/// gamma-fat-shattering dimension: largest set shattered at margin gamma
/// around some shift vector.
inline DimResult fat_dim(const SampledClass& F, double gamma, const SearchLimits& limits = {}) {
  return detail::margin_dim(F, gamma, ShiftMode::shifted, limits);
}

/// Fat-shattering dimension with the shift pinned to zero.
inline DimResult faat_dim(const SampledClass& F, double gamma, const SearchLimits& limits = {}) {
  return detail::margin_dim(F, gamma, ShiftMode::zero, limits);
}

/// Largest S with P(S) containing every labeling in {0,1}^S. Rows with a
/// `*` inside S contribute nothing on S. Works unchanged for total classes.
inline DimResult vc_dim_partial(const PartialClass& P, const SearchLimits& limits = {}) {
  if (P.cols() > limits.max_domain)
    throw std::invalid_argument("domain exceeds exact search limit");
  if (P.rows() == 0) return {};
  auto labeling_witnesses = [&](const IndexSet& s, detail::Budget& budget) {
    const std::size_t n_patterns = detail::pattern_count(s.size());
    std::vector<std::optional<Index>> witness(n_patterns);
    std::size_t found = 0;
    for (Index f = 0; f < P.rows() && found < n_patterns; ++f) {
      budget.charge();
      Pattern y = 0;
      bool defined = true;
      for (std::size_t i = 0; i < s.size() && defined; ++i) {
        const Label l = P.at(f, s[i]);
        if (l == Label::star) defined = false;
        else if (l == Label::one) y |= Pattern{1} << i;
      }
      if (defined && !witness[y]) {
        witness[y] = f;
        ++found;
      }
    }
    return std::make_pair(found == n_patterns, witness);
  };

  IndexSet singles;
  for (Index x = 0; x < P.cols(); ++x) {
    bool zero = false, one = false;
    for (Index f = 0; f < P.rows(); ++f) {
      zero |= P.at(f, x) == Label::zero;
      one |= P.at(f, x) == Label::one;
    }
    if (zero && one) singles.push_back(x);
  }
  const std::size_t bound = detail::log2_floor(dedup_rows(P).rows());
  DimResult result = detail::levelwise_search(
      singles, bound, limits,
      [&](const IndexSet& s, detail::Budget& budget) { return labeling_witnesses(s, budget).first; });
  if (result.certificate) {
    SearchStats scratch;
    detail::Budget unlimited{std::numeric_limits<std::uint64_t>::max(), &scratch};
    auto& cert = *result.certificate;
    const auto [ok, witness] = labeling_witnesses(cert.subset, unlimited);
    cert.shift.assign(cert.subset.size(), 0.0);
    for (const auto& w : witness) cert.witnesses.push_back(*w);
  }
  return result;
}

/// Independent route to fat_dim: the maximum over shifts r of the zero-shift
/// dimension of F - r, with r drawn from the per-column midpoint grid
/// {(v + w) / 2}. The maximum over r is taken subset by subset, largest first.
inline DimResult fat_via_shift_scan(const SampledClass& F, double gamma, const SearchLimits& limits = {}) {
  detail::check_gamma(gamma);
  const std::size_t n = F.cols();
  if (n > limits.max_domain) throw std::invalid_argument("domain exceeds exact search limit");

  std::vector<std::vector<double>> grid(n);
  for (Index x = 0; x < n; ++x) {
    std::set<double> mids;
    for (Index f = 0; f < F.rows(); ++f)
      for (Index g = f; g < F.rows(); ++g) mids.insert((F.at(f, x) + F.at(g, x)) / 2);
    grid[x].assign(mids.begin(), mids.end());
  }

  DimResult result;
  detail::Budget budget{limits.node_budget, &result.stats};

  // Does some grid shift over `s` make F - r zero-shatter s?
  auto shattered_by_some_shift = [&](const IndexSet& s) -> std::optional<ShatterCertificate> {
    const std::size_t m = s.size();
    const std::size_t n_patterns = detail::pattern_count(m);
    std::vector<std::size_t> pos(m, 0);
    std::vector<double> r(m);
    while (true) {
      if (!budget.charge()) return std::nullopt;
      for (std::size_t i = 0; i < m; ++i) r[i] = grid[s[i]][pos[i]];
      std::vector<std::optional<Index>> witness(n_patterns);
      std::size_t found = 0;
      for (Index f = 0; f < F.rows() && found < n_patterns; ++f) {
        Pattern y = 0;
        bool decided = true;
        for (std::size_t i = 0; i < m && decided; ++i) {
          const double v = F.at(f, s[i]) - r[i];
          if (v >= gamma) y |= Pattern{1} << i;
          else if (!(v <= -gamma)) decided = false;
        }
        if (decided && !witness[y]) {
          witness[y] = f;
          ++found;
        }
      }
      if (found == n_patterns) {
        ShatterCertificate cert{s, r, {}, gamma};
        for (const auto& w : witness) cert.witnesses.push_back(*w);
        return cert;
      }
      std::size_t i = 0;
      while (i < m && ++pos[i] == grid[s[i]].size()) pos[i++] = 0;
      if (i == m) return std::nullopt;
    }
  };

  const std::size_t top = std::min({n, limits.max_subset, detail::kMaxPatternBits,
                                    detail::log2_floor(dedup_rows(F).rows())});
  for (std::size_t size = top; size >= 1 && !budget.exhausted; --size) {
    // Subsets of this size in lexicographic order.
    IndexSet s(size);
    for (std::size_t i = 0; i < size; ++i) s[i] = i;
    while (true) {
      ++result.stats.subsets_examined;
      if (auto cert = shattered_by_some_shift(s)) {
        result.dimension = size;
        result.certificate = std::move(cert);
        return result;
      }
      if (budget.exhausted) break;
      std::size_t i = size;
      while (i > 0 && s[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++s[i - 1];
      for (std::size_t j = i; j < size; ++j) s[j] = s[j - 1] + 1;
    }
  }
  result.exact = !budget.exhausted;
  return result;
}

/// Half-difference construction: for a shifted certificate, f = (f_y - f_{-y}) / 2
/// realizes pattern y with r = 0 at the same margin.
struct ZeroShiftResult {
  SampledClass functions;       // one constructed row per pattern, over the full domain
  ShatterCertificate certificate;  // zero-shift, witnesses index `functions`
  std::vector<bool> membership;    // constructed row equals some row of F exactly
};

inline ZeroShiftResult zero_shift_certificate(const SampledClass& F, const ShatterCertificate& cert) {
  if (!check_certificate(F, cert, ShiftMode::shifted))
    throw std::invalid_argument("input certificate does not validate");
  const std::size_t m = cert.subset.size();
  const std::size_t n_patterns = detail::pattern_count(m);
  const Pattern all = static_cast<Pattern>(n_patterns - 1);

  std::vector<std::vector<double>> rows(n_patterns, std::vector<double>(F.cols()));
  for (std::size_t y = 0; y < n_patterns; ++y) {
    const Index hat = cert.witnesses[y];
    const Index check = cert.witnesses[all ^ static_cast<Pattern>(y)];
    for (Index x = 0; x < F.cols(); ++x) rows[y][x] = (F.at(hat, x) - F.at(check, x)) / 2;
  }

  std::set<std::vector<double>> members;
  for (const auto& r : F.to_rows()) members.insert(r);
  ZeroShiftResult out{SampledClass(F.domain(), rows), {}, {}};
  for (const auto& r : rows) out.membership.push_back(members.count(r) > 0);

  out.certificate.subset = cert.subset;
  out.certificate.shift.assign(m, 0.0);
  out.certificate.gamma = cert.gamma;
  out.certificate.witnesses.resize(n_patterns);
  for (std::size_t y = 0; y < n_patterns; ++y) out.certificate.witnesses[y] = y;
  return out;
}

}  // namespace fatmax

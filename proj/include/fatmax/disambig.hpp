#pragma once

// Disambiguation of partial concept classes: validity checks, an exhaustive
// minimum-VC search for tiny classes, a greedy completion heuristic and the
// single-row disambiguation available when the partial class has VC 0.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fatmax/core.hpp"
#include "fatmax/dims.hpp"

namespace fatmax {

/// A total class plus, for each partial row, the index of the total row
/// that disambiguates it.
struct Disambiguation {
  PartialClass total;
  std::vector<Index> assignment;
};

inline bool agrees(const PartialClass::Row& partial, const PartialClass::Row& total) {
  for (std::size_t x = 0; x < partial.size(); ++x)
    if (partial[x] != Label::star && partial[x] != total[x]) return false;
  return true;
}

/// Every partial row must be assigned a total row agreeing on its defined
/// entries. Total rows that serve no partial row are allowed.
inline bool is_disambiguation(const PartialClass& P, const Disambiguation& D) {
  if (!D.total.is_total() || D.total.cols() != P.cols()) return false;
  if (D.assignment.size() != P.rows()) return false;
  for (Index f = 0; f < P.rows(); ++f) {
    if (D.assignment[f] >= D.total.rows()) return false;
    if (!agrees(P.row(f), D.total.row(D.assignment[f]))) return false;
  }
  return true;
}

namespace detail {

// VC dimension of a total class over at most 31 points, rows as bitmasks.
inline std::size_t vc_of_masks(const std::vector<std::uint32_t>& rows, std::size_t n) {
  std::size_t best = 0;
  std::vector<std::uint8_t> seen;
  for (std::uint32_t s = 1; s < (std::uint32_t{1} << n); ++s) {
    const auto m = static_cast<std::size_t>(std::popcount(s));
    if (m <= best || (std::size_t{1} << m) > rows.size()) continue;
    seen.assign(std::size_t{1} << m, 0);
    std::size_t count = 0;
    for (std::uint32_t r : rows) {
      // Compress the bits of r selected by s.
      std::uint32_t key = 0, bit = 0;
      for (std::uint32_t t = s; t; t &= t - 1, ++bit)
        if (r & (t & (~t + 1))) key |= 1U << bit;
      if (!seen[key]) {
        seen[key] = 1;
        ++count;
      }
    }
    if (count == (std::size_t{1} << m)) best = m;
  }
  return best;
}

inline std::uint32_t row_mask(const PartialClass::Row& row) {
  std::uint32_t m = 0;
  for (std::size_t x = 0; x < row.size(); ++x)
    if (row[x] == Label::one) m |= 1U << x;
  return m;
}

inline PartialClass::Row mask_row(std::uint32_t m, std::size_t n) {
  PartialClass::Row row(n);
  for (std::size_t x = 0; x < n; ++x) row[x] = ((m >> x) & 1U) ? Label::one : Label::zero;
  return row;
}

// Builds a Disambiguation from one chosen completion per partial row.
inline Disambiguation from_completions(const PartialClass& P, const std::vector<std::uint32_t>& chosen) {
  std::vector<std::uint32_t> distinct;
  std::vector<Index> assignment;
  for (std::uint32_t c : chosen) {
    auto it = std::find(distinct.begin(), distinct.end(), c);
    if (it == distinct.end()) {
      assignment.push_back(distinct.size());
      distinct.push_back(c);
    } else {
      assignment.push_back(static_cast<Index>(it - distinct.begin()));
    }
  }
  std::vector<PartialClass::Row> rows;
  for (std::uint32_t c : distinct) rows.push_back(mask_row(c, P.cols()));
  return {PartialClass(P.domain(), std::move(rows)), std::move(assignment)};
}

}  // namespace detail

inline std::size_t vc_of_total(const PartialClass& T) {
  if (!T.is_total()) throw std::invalid_argument("vc_of_total needs a total class");
  if (T.cols() > 31) return vc_dim_partial(T).dimension;
  std::vector<std::uint32_t> masks;
  for (const auto& r : T.row_data()) masks.push_back(detail::row_mask(r));
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  return detail::vc_of_masks(masks, T.cols());
}

struct ExactDisambigLimits {
  std::size_t max_domain = 5;
  std::size_t max_rows = 10;
  std::uint64_t node_budget = 20'000'000;
};

struct MinVcDisambiguation {
  Disambiguation disambiguation;
  std::size_t vc = 0;
};

/// Exhaustive search over per-row completions (each * set to 0 or 1) for a
/// disambiguation of minimum VC dimension; ties go to fewer distinct rows,
/// then to the lexicographically first completion sequence.
inline MinVcDisambiguation min_vc_disambiguation_exact(const PartialClass& P,
                                                       const ExactDisambigLimits& limits = {}) {
  if (P.cols() > limits.max_domain || P.rows() > limits.max_rows)
    throw BudgetExceeded("partial class too large for exact disambiguation; use greedy");
  const std::size_t n = P.cols();

  // All completions of each row, ascending as bitmasks.
  std::vector<std::vector<std::uint32_t>> completions(P.rows());
  for (Index f = 0; f < P.rows(); ++f) {
    std::uint32_t fixed = 0, free = 0;
    for (std::size_t x = 0; x < n; ++x) {
      if (P.at(f, x) == Label::one) fixed |= 1U << x;
      else if (P.at(f, x) == Label::star) free |= 1U << x;
    }
    // Enumerate submasks of `free` in increasing order.
    std::uint32_t sub = 0;
    do {
      completions[f].push_back(fixed | sub);
      sub = (sub - free) & free;
    } while (sub != 0);
    std::sort(completions[f].begin(), completions[f].end());
  }

  struct Best {
    std::size_t vc = SIZE_MAX, distinct = SIZE_MAX;
    std::vector<std::uint32_t> chosen;
  } best;
  std::vector<std::uint32_t> chosen;
  std::vector<std::uint32_t> distinct;
  std::uint64_t nodes = 0;

  // Partial VC and distinct count never decrease as rows are added, so the
  // first completion sequence reaching a given (vc, distinct) pair wins.
  auto recurse = [&](auto&& self, std::size_t f) -> void {
    if (++nodes > limits.node_budget) throw BudgetExceeded("exact disambiguation node budget exhausted");
    const std::size_t vc = detail::vc_of_masks(distinct, n);
    if (std::pair(vc, distinct.size()) >= std::pair(best.vc, best.distinct)) return;
    if (f == P.rows()) {
      best = {vc, distinct.size(), chosen};
      return;
    }
    for (std::uint32_t c : completions[f]) {
      const bool is_new = std::find(distinct.begin(), distinct.end(), c) == distinct.end();
      if (is_new) distinct.push_back(c);
      chosen.push_back(c);
      self(self, f + 1);
      chosen.pop_back();
      if (is_new) distinct.pop_back();
    }
  };
  recurse(recurse, 0);
  return {detail::from_completions(P, best.chosen), best.vc};
}

/// Row by row: reuse the first existing total row that agrees with the
/// partial row, else fill each * with the majority defined label of that
/// column in P (0 on ties or when the column has no defined label).
inline Disambiguation greedy_disambiguation(const PartialClass& P) {
  const std::size_t n = P.cols();
  std::vector<Label> fill(n, Label::zero);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t zeros = 0, ones = 0;
    for (Index f = 0; f < P.rows(); ++f) {
      zeros += P.at(f, x) == Label::zero;
      ones += P.at(f, x) == Label::one;
    }
    if (ones > zeros) fill[x] = Label::one;
  }
  std::vector<PartialClass::Row> total;
  std::vector<Index> assignment;
  for (Index f = 0; f < P.rows(); ++f) {
    const auto& row = P.row(f);
    auto it = std::find_if(total.begin(), total.end(), [&](const auto& t) { return agrees(row, t); });
    if (it != total.end()) {
      assignment.push_back(static_cast<Index>(it - total.begin()));
      continue;
    }
    PartialClass::Row completed = row;
    for (std::size_t x = 0; x < n; ++x)
      if (completed[x] == Label::star) completed[x] = fill[x];
    assignment.push_back(total.size());
    total.push_back(std::move(completed));
  }
  return {PartialClass(P.domain(), std::move(total)), std::move(assignment)};
}

/// For VC 0: each column carries at most one defined label; use it, and 0 for
/// columns that are * everywhere.
inline Disambiguation singleton_disambiguation(const PartialClass& P) {
  PartialClass::Row g(P.cols(), Label::zero);
  for (std::size_t x = 0; x < P.cols(); ++x) {
    bool zero = false, one = false;
    for (Index f = 0; f < P.rows(); ++f) {
      zero |= P.at(f, x) == Label::zero;
      one |= P.at(f, x) == Label::one;
    }
    if (zero && one)
      throw std::invalid_argument("column " + std::to_string(x) + " carries both labels; VC is not 0");
    if (one) g[x] = Label::one;
  }
  return {PartialClass(P.domain(), {g}), std::vector<Index>(P.rows(), 0)};
}

/// Size bounds for a good disambiguation of a VC-d partial class on n points:
/// (n+1)^((d+1) log2 n + 2), and the looser n^(5 d log2 n) valid for d > 0, n > 1.
/// Returned as natural logarithms to stay finite.
inline double log_disambiguation_bound(std::size_t n, std::size_t d) {
  const double nn = static_cast<double>(n);
  return ((static_cast<double>(d) + 1) * std::log2(nn) + 2) * std::log(nn + 1);
}

inline double log_disambiguation_bound_coarse(std::size_t n, std::size_t d) {
  if (d == 0 || n < 2) throw std::invalid_argument("coarse bound needs d > 0 and more than one point");
  const double nn = static_cast<double>(n);
  return 5.0 * static_cast<double>(d) * std::log2(nn) * std::log(nn);
}

struct SizeCheck {
  std::size_t distinct_rows;
  std::size_t domain;
  std::size_t vc_partial;
  double log_bound_fine;
  double log_bound_coarse;  // NaN when d = 0 or a single point
  bool holds;
};

/// Compares the distinct-row count of a disambiguation against both bounds.
inline SizeCheck disambiguation_size_check(const PartialClass& P, const Disambiguation& D) {
  SizeCheck c{};
  c.distinct_rows = distinct_row_count(D.total);
  c.domain = P.cols();
  c.vc_partial = vc_dim_partial(P).dimension;
  c.log_bound_fine = log_disambiguation_bound(c.domain, c.vc_partial);
  const double log_size = std::log(static_cast<double>(c.distinct_rows));
  c.holds = log_size <= c.log_bound_fine + 1e-12;
  if (c.vc_partial > 0 && c.domain > 1) {
    c.log_bound_coarse = log_disambiguation_bound_coarse(c.domain, c.vc_partial);
    c.holds = c.holds && log_size <= c.log_bound_coarse + 1e-12;
  } else {
    c.log_bound_coarse = std::nan("");
  }
  return c;
}

}  // namespace fatmax

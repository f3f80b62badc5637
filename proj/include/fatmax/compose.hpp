#pragma once

// Class-level operators: k-fold pointwise maximum, shift, scale, sign
// thresholding and the hinge loss.

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fatmax/core.hpp"
#include "fatmax/rng.hpp"

namespace fatmax {

enum class MaxMode { full, sampled };

struct MaxSpec {
  MaxMode mode = MaxMode::full;
  // Full mode refuses cross products larger than this.
  std::uint64_t cap = 1'000'000;
  // Sampled mode: number of distinct tuples to draw and the stream seed.
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
  bool dedup = false;
};

/// Rows of a k-fold maximum together with the component tuple behind each.
struct MaxResult {
  SampledClass cls;
  std::vector<std::vector<Index>> tuples;
};

namespace detail {

inline std::vector<Index> decode_tuple(std::uint64_t code, std::span<const SampledClass> classes) {
  // Mixed radix, first component most significant: codes ascend in
  // lexicographic tuple order.
  std::vector<Index> tuple(classes.size());
  for (std::size_t i = classes.size(); i-- > 0;) {
    tuple[i] = static_cast<Index>(code % classes[i].rows());
    code /= classes[i].rows();
  }
  return tuple;
}

}  // namespace detail

inline MaxResult k_fold_max_with_tuples(std::span<const SampledClass> classes, const MaxSpec& spec = {}) {
  if (classes.empty()) throw std::invalid_argument("k-fold max needs k >= 1 classes");
  const auto& domain = classes.front().domain();
  for (const auto& c : classes)
    if (c.domain() != domain) throw std::invalid_argument("k-fold max components must share a domain");

  std::uint64_t total = 1;
  bool overflow = false;
  for (const auto& c : classes) {
    if (total > UINT64_MAX / c.rows()) overflow = true;
    else total *= c.rows();
  }

  std::vector<std::uint64_t> codes;
  if (spec.mode == MaxMode::full) {
    if (overflow || total > spec.cap)
      throw BudgetExceeded("cross product of " + (overflow ? std::string("> 2^64") : std::to_string(total)) +
                           " tuples exceeds cap " + std::to_string(spec.cap));
    codes.resize(total);
    for (std::uint64_t c = 0; c < total; ++c) codes[c] = c;
  } else {
    if (overflow) throw std::invalid_argument("tuple space too large to index");
    if (spec.count == 0) throw std::invalid_argument("sampled k-fold max needs count >= 1");
    const std::uint64_t want = std::min(spec.count, total);
    // Floyd's algorithm: `want` distinct codes without replacement.
    Rng rng(spec.seed);
    std::set<std::uint64_t> chosen;
    for (std::uint64_t j = total - want; j < total; ++j) {
      const auto t = static_cast<std::uint64_t>(rng.uniform_int(0, static_cast<std::int64_t>(j)));
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    codes.assign(chosen.begin(), chosen.end());
  }

  MaxResult out;
  std::vector<std::vector<double>> rows;
  std::set<std::vector<double>> seen;
  rows.reserve(codes.size());
  for (std::uint64_t code : codes) {
    auto tuple = detail::decode_tuple(code, classes);
    std::vector<double> row(domain.size());
    for (Index x = 0; x < domain.size(); ++x) {
      double v = classes[0].at(tuple[0], x);
      for (std::size_t i = 1; i < classes.size(); ++i) v = std::max(v, classes[i].at(tuple[i], x));
      row[x] = v;
    }
    if (spec.dedup && !seen.insert(row).second) continue;
    rows.push_back(std::move(row));
    out.tuples.push_back(std::move(tuple));
  }
  Metadata meta{{"operator", "k_fold_max"},
                {"k", std::to_string(classes.size())},
                {"mode", spec.mode == MaxMode::full ? "full" : "sampled"}};
  if (spec.mode == MaxMode::sampled) {
    meta["seed"] = std::to_string(spec.seed);
    meta["generator"] = kGeneratorVersion;
  }
  out.cls = SampledClass(domain, std::move(rows), std::move(meta));
  return out;
}

/// Pointwise maximum over one function from each component class.
inline SampledClass k_fold_max(std::span<const SampledClass> classes, const MaxSpec& spec = {}) {
  return k_fold_max_with_tuples(classes, spec).cls;
}

/// F - r, column by column.
inline SampledClass shift_class(const SampledClass& F, std::span<const double> r) {
  if (r.size() != F.cols()) throw std::invalid_argument("shift vector length must match the domain");
  auto rows = F.to_rows();
  for (auto& row : rows)
    for (Index x = 0; x < row.size(); ++x) row[x] -= r[x];
  return SampledClass(F.domain(), std::move(rows), F.metadata());
}

inline SampledClass scale_class(const SampledClass& F, double lambda) {
  auto rows = F.to_rows();
  for (auto& row : rows)
    for (double& v : row) v *= lambda;
  return SampledClass(F.domain(), std::move(rows), F.metadata());
}

/// Entrywise 1[t >= 0] as a total {0,1} class.
inline PartialClass sign_threshold_class(const SampledClass& F) {
  std::vector<PartialClass::Row> rows(F.rows(), PartialClass::Row(F.cols()));
  for (Index f = 0; f < F.rows(); ++f)
    for (Index x = 0; x < F.cols(); ++x) rows[f][x] = F.at(f, x) >= 0.0 ? Label::one : Label::zero;
  return PartialClass(F.domain(), std::move(rows));
}

/// Union (entrywise OR) of total classes over all tuples, in the same tuple
/// order as k_fold_max in full mode.
inline PartialClass union_class(std::span<const PartialClass> classes) {
  if (classes.empty()) throw std::invalid_argument("union needs k >= 1 classes");
  std::uint64_t total = 1;
  for (const auto& c : classes) total *= c.rows();
  std::vector<PartialClass::Row> rows;
  std::vector<Index> tuple(classes.size(), 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t rest = code;
    for (std::size_t i = classes.size(); i-- > 0;) {
      tuple[i] = static_cast<Index>(rest % classes[i].rows());
      rest /= classes[i].rows();
    }
    PartialClass::Row row(classes[0].cols(), Label::zero);
    for (std::size_t i = 0; i < classes.size(); ++i)
      for (Index x = 0; x < row.size(); ++x) {
        const Label l = classes[i].at(tuple[i], x);
        if (l == Label::star) throw std::invalid_argument("union is defined for total classes");
        if (l == Label::one) row[x] = Label::one;
      }
    rows.push_back(std::move(row));
  }
  return PartialClass(classes[0].domain(), std::move(rows));
}

/// A point of the label-augmented domain: (domain index, label in {-1, +1}).
struct AugmentedPoint {
  Index point;
  int label;
};

inline std::vector<std::string> augmented_labels(const SampledClass& F,
                                                 std::span<const AugmentedPoint> points) {
  std::vector<std::string> labels;
  for (const auto& p : points) {
    if (p.point >= F.cols()) throw std::out_of_range("augmented point index out of range");
    if (p.label != 1 && p.label != -1) throw std::invalid_argument("augmented label must be +1 or -1");
    labels.push_back(F.domain()[p.point] + (p.label > 0 ? ":+" : ":-"));
  }
  return labels;
}

/// (x, y) -> y f(x) over the given augmented points.
inline SampledClass label_augment_class(const SampledClass& F, std::span<const AugmentedPoint> points) {
  auto labels = augmented_labels(F, points);
  std::vector<std::vector<double>> rows(F.rows());
  for (Index f = 0; f < F.rows(); ++f)
    for (const auto& p : points) rows[f].push_back(p.label * F.at(f, p.point));
  return SampledClass(std::move(labels), std::move(rows), F.metadata());
}

/// (x, y) -> max{0, 1 - y f(x)} over the given augmented points.
inline SampledClass hinge_loss_class(const SampledClass& F, std::span<const AugmentedPoint> points) {
  auto labels = augmented_labels(F, points);
  std::vector<std::vector<double>> rows(F.rows());
  for (Index f = 0; f < F.rows(); ++f)
    for (const auto& p : points) rows[f].push_back(std::max(0.0, 1.0 - p.label * F.at(f, p.point)));
  return SampledClass(std::move(labels), std::move(rows), F.metadata());
}

/// Hinge loss with one label per domain point.
inline SampledClass hinge_loss_class(const SampledClass& F, std::span<const int> labels) {
  if (labels.size() != F.cols()) throw std::invalid_argument("need one label per domain point");
  std::vector<AugmentedPoint> points;
  for (Index x = 0; x < F.cols(); ++x) points.push_back({x, labels[x]});
  return hinge_loss_class(F, std::span<const AugmentedPoint>(points));
}

}  // namespace fatmax

#pragma once

// Data model for finite function classes: real-valued classes stored as a
// dense functions-by-points matrix, three-valued partial classes, probability
// measures over the domain, and the margin discretizer linking the two.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fatmax {

// Input that violates a type invariant (ragged rows, bad alphabet, ...).
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exact search ran out of its configured node or size budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Index = std::size_t;
using IndexSet = std::vector<Index>;
using Metadata = std::map<std::string, std::string>;

inline std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  return labels;
}

template <class Rows>
std::vector<std::string> width_labels(const Rows& rows) {
  return default_labels(rows.empty() ? 0 : rows.front().size());
}

/// A finite class F of real functions on a finite domain. Entry (f, x) is f(x).
/// Duplicate rows are kept; `dedup_rows` removes them explicitly.
class SampledClass {
 public:
  SampledClass() = default;

  SampledClass(std::vector<std::string> domain, std::vector<std::vector<double>> rows,
               Metadata metadata = {})
      : domain_(std::move(domain)), metadata_(std::move(metadata)) {
    if (domain_.empty()) throw SchemaError("class domain must contain at least one point");
    if (rows.empty()) throw SchemaError("class must contain at least one function");
    values_.reserve(rows.size() * domain_.size());
    for (const auto& row : rows) {
      if (row.size() != domain_.size())
        throw SchemaError("ragged row: expected " + std::to_string(domain_.size()) +
                          " values, got " + std::to_string(row.size()));
      for (double v : row) {
        if (!std::isfinite(v)) throw SchemaError("class values must be finite");
        values_.push_back(v);
      }
    }
    n_rows_ = rows.size();
  }

  explicit SampledClass(std::vector<std::vector<double>> rows, Metadata metadata = {}) {
    auto labels = width_labels(rows);
    *this = SampledClass(std::move(labels), std::move(rows), std::move(metadata));
  }

  std::size_t rows() const { return n_rows_; }
  std::size_t cols() const { return domain_.size(); }
  double at(Index f, Index x) const { return values_[f * cols() + x]; }

  std::span<const double> row(Index f) const {
    return {values_.data() + f * cols(), cols()};
  }

  std::vector<std::vector<double>> to_rows() const {
    std::vector<std::vector<double>> out;
    out.reserve(rows());
    for (Index f = 0; f < rows(); ++f) out.emplace_back(row(f).begin(), row(f).end());
    return out;
  }

  const std::vector<std::string>& domain() const { return domain_; }
  const Metadata& metadata() const { return metadata_; }
  Metadata& metadata() { return metadata_; }

  friend bool operator==(const SampledClass& a, const SampledClass& b) {
    return a.domain_ == b.domain_ && a.n_rows_ == b.n_rows_ && a.values_ == b.values_;
  }

 private:
  std::vector<std::string> domain_;
  std::vector<double> values_;
  std::size_t n_rows_ = 0;
  Metadata metadata_;
};

enum class Label : std::uint8_t { zero = 0, one = 1, star = 2 };

inline char to_char(Label l) { return l == Label::zero ? '0' : l == Label::one ? '1' : '*'; }

/// A partial concept class: functions into {0, 1, *}. A class with no `*`
/// entries is total and is used to represent disambiguations as well.
class PartialClass {
 public:
  using Row = std::vector<Label>;

  PartialClass() = default;

  PartialClass(std::vector<std::string> domain, std::vector<Row> rows)
      : domain_(std::move(domain)), rows_(std::move(rows)) {
    for (const auto& row : rows_) {
      if (row.size() != domain_.size())
        throw SchemaError("ragged partial row: expected " + std::to_string(domain_.size()) +
                          " entries, got " + std::to_string(row.size()));
      for (Label l : row)
        if (static_cast<std::uint8_t>(l) > 2) throw SchemaError("label outside {0, 1, *}");
    }
  }

  explicit PartialClass(std::vector<Row> rows) {
    auto labels = width_labels(rows);
    *this = PartialClass(std::move(labels), std::move(rows));
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return domain_.size(); }
  Label at(Index f, Index x) const { return rows_[f][x]; }
  const Row& row(Index f) const { return rows_[f]; }
  const std::vector<Row>& row_data() const { return rows_; }
  const std::vector<std::string>& domain() const { return domain_; }

  bool is_total() const {
    return std::ranges::all_of(rows_, [](const Row& r) {
      return std::ranges::none_of(r, [](Label l) { return l == Label::star; });
    });
  }

  friend bool operator==(const PartialClass& a, const PartialClass& b) {
    return a.domain_ == b.domain_ && a.rows_ == b.rows_;
  }

 private:
  std::vector<std::string> domain_;
  std::vector<Row> rows_;
};

/// Parses "01*" style strings; handy in tests and small fixtures.
inline PartialClass::Row parse_row(std::string_view text) {
  PartialClass::Row row;
  for (char c : text) {
    switch (c) {
      case '0': row.push_back(Label::zero); break;
      case '1': row.push_back(Label::one); break;
      case '*': row.push_back(Label::star); break;
      default: throw SchemaError(std::string("invalid partial label '") + c + "'");
    }
  }
  return row;
}

inline PartialClass partial_from_strings(const std::vector<std::string>& rows) {
  std::vector<PartialClass::Row> parsed;
  for (const auto& r : rows) parsed.push_back(parse_row(r));
  return PartialClass(std::move(parsed));
}

inline std::string row_string(const PartialClass::Row& row) {
  std::string s;
  for (Label l : row) s.push_back(to_char(l));
  return s;
}

/// Probability weights over the domain points.
class Measure {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit Measure(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw SchemaError("measure needs at least one weight");
    double total = 0.0;
    for (double w : weights_) {
      if (!std::isfinite(w) || w < 0.0) throw SchemaError("measure weights must be nonnegative");
      total += w;
    }
    if (std::abs(total - 1.0) > kSumTolerance)
      throw SchemaError("measure weights must sum to 1");
  }

  static Measure uniform(std::size_t n) {
    return Measure(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return weights_.size(); }
  double operator[](Index i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  // Uniform weights 1/n may not sum to exactly 1 in binary; the tolerance
  // above absorbs that.
  std::vector<double> weights_;
};

struct DiscretizerSpec {
  double gamma;

  explicit DiscretizerSpec(double g) : gamma(g) {
    if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("gamma must be positive");
  }
};

/// Margin discretizer: t <= -gamma -> 0, t >= gamma -> 1, otherwise *.
inline Label discretize(double t, const DiscretizerSpec& spec) {
  if (t >= spec.gamma) return Label::one;
  if (t <= -spec.gamma) return Label::zero;
  return Label::star;
}

inline void check_subset(const IndexSet& subset, std::size_t n) {
  if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
  for (Index i : subset)
    if (i >= n) throw std::out_of_range("subset index " + std::to_string(i) + " out of range");
}

/// Projection of F onto the points in `subset`, in the given order.
inline SampledClass restrict(const SampledClass& F, const IndexSet& subset) {
  check_subset(subset, F.cols());
  std::vector<std::string> domain;
  for (Index i : subset) domain.push_back(F.domain()[i]);
  std::vector<std::vector<double>> rows(F.rows());
  for (Index f = 0; f < F.rows(); ++f)
    for (Index i : subset) rows[f].push_back(F.at(f, i));
  return SampledClass(std::move(domain), std::move(rows), F.metadata());
}

inline PartialClass restrict(const PartialClass& P, const IndexSet& subset) {
  check_subset(subset, P.cols());
  std::vector<std::string> domain;
  for (Index i : subset) domain.push_back(P.domain()[i]);
  std::vector<PartialClass::Row> rows(P.rows());
  for (Index f = 0; f < P.rows(); ++f)
    for (Index i : subset) rows[f].push_back(P.at(f, i));
  return PartialClass(std::move(domain), std::move(rows));
}

inline PartialClass discretize_class(const SampledClass& F, const DiscretizerSpec& spec) {
  std::vector<PartialClass::Row> rows(F.rows(), PartialClass::Row(F.cols()));
  for (Index f = 0; f < F.rows(); ++f)
    for (Index x = 0; x < F.cols(); ++x) rows[f][x] = discretize(F.at(f, x), spec);
  return PartialClass(F.domain(), std::move(rows));
}

/// Keeps the first occurrence of each distinct row, preserving order.
inline SampledClass dedup_rows(const SampledClass& F) {
  std::map<std::vector<double>, Index> seen;
  std::vector<std::vector<double>> rows;
  for (Index f = 0; f < F.rows(); ++f) {
    std::vector<double> r(F.row(f).begin(), F.row(f).end());
    if (seen.emplace(r, f).second) rows.push_back(std::move(r));
  }
  return SampledClass(F.domain(), std::move(rows), F.metadata());
}

inline PartialClass dedup_rows(const PartialClass& P) {
  std::map<PartialClass::Row, Index> seen;
  std::vector<PartialClass::Row> rows;
  for (Index f = 0; f < P.rows(); ++f)
    if (seen.emplace(P.row(f), f).second) rows.push_back(P.row(f));
  return PartialClass(P.domain(), std::move(rows));
}

inline std::size_t distinct_row_count(const PartialClass& P) { return dedup_rows(P).rows(); }

}  // namespace fatmax

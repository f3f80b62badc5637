#pragma once

// Seeded generators for the test and experiment classes. Real-valued
// generators emit values on coarse grids so margin comparisons are exact.

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "fatmax/core.hpp"
#include "fatmax/rng.hpp"

namespace fatmax {

inline Metadata generator_meta(std::string family, std::uint64_t seed) {
  return {{"generator", kGeneratorVersion}, {"family", std::move(family)}, {"seed", std::to_string(seed)}};
}

/// {-gamma, gamma}^n; row y has +gamma exactly at the set bits of y.
inline SampledClass cube_class(std::size_t n, double gamma) {
  if (n == 0 || n > 24) throw std::invalid_argument("cube dimension must be in [1, 24]");
  std::vector<std::vector<double>> rows;
  for (std::size_t y = 0; y < (std::size_t{1} << n); ++y) {
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = (y >> i & 1U) ? gamma : -gamma;
    rows.push_back(std::move(row));
  }
  return SampledClass(std::move(rows), {{"family", "cube"}, {"gamma", std::to_string(gamma)}});
}

/// Values drawn uniformly from {lo, lo + step, ..., hi}.
inline SampledClass random_grid_class(std::size_t rows, std::size_t cols, double lo, double hi, double step,
                                      std::uint64_t seed) {
  Rng rng(seed);
  const auto levels = static_cast<std::int64_t>(std::llround((hi - lo) / step));
  std::vector<std::vector<double>> values(rows, std::vector<double>(cols));
  for (auto& row : values)
    for (double& v : row) v = lo + step * static_cast<double>(rng.uniform_int(0, levels));
  return SampledClass(std::move(values), generator_meta("grid", seed));
}

/// Integer-valued class with entries in [lo, hi].
inline SampledClass random_integer_class(std::size_t rows, std::size_t cols, int lo, int hi, std::uint64_t seed) {
  return random_grid_class(rows, cols, lo, hi, 1.0, seed);
}

/// The full grid {-1, -1 + h, ..., 1}^n with `levels` values per coordinate.
inline SampledClass value_grid_class(std::size_t n, std::size_t levels) {
  if (levels < 2) throw std::invalid_argument("value grid needs at least two levels");
  const double h = 2.0 / static_cast<double>(levels - 1);
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> pos(n, 0);
  while (true) {
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = -1.0 + h * static_cast<double>(pos[i]);
    rows.push_back(std::move(row));
    std::size_t i = 0;
    while (i < n && ++pos[i] == levels) pos[i++] = 0;
    if (i == n) break;
  }
  return SampledClass(std::move(rows), {{"family", "value-grid"}, {"levels", std::to_string(levels)}});
}

/// B followed by every (f - g) / 2 for f, g in B that is not already present.
inline SampledClass half_difference_closure(const SampledClass& B) {
  auto rows = B.to_rows();
  std::set<std::vector<double>> seen(rows.begin(), rows.end());
  for (Index f = 0; f < B.rows(); ++f)
    for (Index g = 0; g < B.rows(); ++g) {
      std::vector<double> r(B.cols());
      for (Index x = 0; x < B.cols(); ++x) r[x] = (B.at(f, x) - B.at(g, x)) / 2;
      if (seen.insert(r).second) rows.push_back(std::move(r));
    }
  return SampledClass(B.domain(), std::move(rows), {{"family", "half-difference-closure"}});
}

/// Each entry is * with probability `star_prob`, else a fair bit.
inline PartialClass random_partial_class(std::size_t rows, std::size_t cols, double star_prob, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PartialClass::Row> values(rows, PartialClass::Row(cols));
  for (auto& row : values)
    for (Label& l : row) l = rng.uniform() < star_prob ? Label::star : (rng.coin() ? Label::one : Label::zero);
  return PartialClass(std::move(values));
}

}  // namespace fatmax

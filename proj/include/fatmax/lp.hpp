#pragma once

// Dense phase-one simplex for small feasibility systems A z >= 1 with z free.
// Bland's rule keeps the pivot sequence deterministic and terminating.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fatmax::lp {

inline constexpr double kPivotTol = 1e-11;
inline constexpr double kFeasTol = 1e-9;

/// Returns z with a_i . z >= 1 for every row a_i of A, or nullopt if none exists.
inline std::optional<std::vector<double>> find_margin_point(const std::vector<std::vector<double>>& A) {
  const std::size_t m = A.size();
  if (m == 0) return std::vector<double>{};
  const std::size_t n = A.front().size();
  for (const auto& row : A)
    if (row.size() != n) throw std::invalid_argument("lp: ragged constraint matrix");

  // Columns: u (n), v (n), surplus (m), artificial (m); last column is rhs.
  const std::size_t n_cols = 2 * n + 2 * m;
  const std::size_t rhs = n_cols;
  std::vector<std::vector<double>> T(m + 1, std::vector<double>(n_cols + 1, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      T[i][j] = A[i][j];
      T[i][n + j] = -A[i][j];
    }
    T[i][2 * n + i] = -1.0;
    T[i][2 * n + m + i] = 1.0;
    T[i][rhs] = 1.0;
    basis[i] = 2 * n + m + i;
  }
  // Objective row: minimize the sum of artificials, written in reduced form.
  auto& obj = T[m];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= n_cols; ++j)
      if (j < 2 * n + m || j == rhs) obj[j] -= T[i][j];

  for (std::size_t iter = 0; iter < 100000; ++iter) {
    std::size_t enter = n_cols;
    for (std::size_t j = 0; j < n_cols; ++j)
      if (obj[j] < -kPivotTol) {
        enter = j;
        break;
      }
    if (enter == n_cols) break;
    std::size_t leave = m;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= kPivotTol) continue;
      const double ratio = T[i][rhs] / T[i][enter];
      if (leave == m || ratio < best_ratio - 1e-14 ||
          (std::abs(ratio - best_ratio) <= 1e-14 && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction; cannot happen for phase one
    const double piv = T[leave][enter];
    for (double& v : T[leave]) v /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || T[i][enter] == 0.0) continue;
      const double factor = T[i][enter];
      for (std::size_t j = 0; j <= n_cols; ++j) T[i][j] -= factor * T[leave][j];
    }
    basis[leave] = enter;
  }
  if (-obj[rhs] > kFeasTol) return std::nullopt;

  std::vector<double> z(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) z[basis[i]] += T[i][rhs];
    else if (basis[i] < 2 * n) z[basis[i] - n] -= T[i][rhs];
  }
  for (const auto& row : A) {
    double dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) dot += row[j] * z[j];
    if (dot < 1.0 - 1e-6) return std::nullopt;
  }
  return z;
}

}  // namespace fatmax::lp

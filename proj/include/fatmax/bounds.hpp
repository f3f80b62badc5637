#pragma once

// Closed-form evaluators for the dimension and covering bounds, plus random
// checks of the elementary inequalities used to derive them.
//
// `log` is natural throughout; Log(x) = log(max(e, x)). Bounds whose
// constants are unspecified take C and c from BoundParams (default 1) and are
// only ever reported, never asserted.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fatmax/rng.hpp"

namespace fatmax {

enum class BoundId {
  thm1,          // 25 D log^2(90 D)
  thm2,          // C D Log^{1+eps}(R k / gamma)
  thm3,          // c Log(k) / gamma^2 * sum R_i^2
  thm4_blumer,   // 2 (d+1) k log(3k)
  thm4,          // c d k Log k
  duan,          // C log(k / gamma) * D, D taken at scale c gamma / sqrt(k)
  fat_hyp,       // min{d+1, (3R/gamma)^2}
  log2x,         // 3A log(3A)
  log2y,         // 5A log^2(18A)
  conj2,         // c Log(k) D, probe only
  lemma1,        // (n+1)^((d+1) log2 n + 2)
  lemma1_coarse, // n^(5 d log2 n)
  talagrand,     // 2^(C fat), lower bound on N(F, L2, t) with fat = fat_{2t}
  mendelson_vershynin,  // (2/t)^(C fat), fat = fat_{ct}
  rudelson_vershynin_p,    // log N <= C p^2 fat log(R / (c t))
  rudelson_vershynin_inf,  // log N <= C v log(R n / (v t)) log^eps(n / v)
  zhang,         // log N <= C R^2/t^2 Log(n R / t)
  lemma11,       // log N <= C R^2/t^2 Log(m t / R)
  maurey,        // (c + c m t^2 / r^2)^ceil(r^2 / t^2)
};

struct BoundParams {
  std::optional<double> gamma;
  std::optional<double> R;
  std::vector<double> R_list;
  std::optional<double> k;
  std::optional<double> d;
  std::optional<double> epsilon;
  std::optional<double> D;  // sum of component dimensions at the relevant scale
  std::optional<double> A;
  std::optional<double> n;
  std::optional<double> m;
  std::optional<double> t;
  std::optional<double> p;
  double C = 1.0;
  double c = 1.0;
};

inline double Log(double x) { return std::log(std::max(std::numbers::e, x)); }

struct BoundName {
  BoundId id;
  std::string_view name;
};

inline constexpr BoundName kBoundNames[] = {
    {BoundId::thm1, "THM1"},
    {BoundId::thm2, "THM2"},
    {BoundId::thm3, "THM3"},
    {BoundId::thm4_blumer, "THM4_BLUMER"},
    {BoundId::thm4, "THM4"},
    {BoundId::duan, "DUAN"},
    {BoundId::fat_hyp, "FAT_HYP"},
    {BoundId::log2x, "LOG2X"},
    {BoundId::log2y, "LOG2Y"},
    {BoundId::conj2, "CONJ2"},
    {BoundId::lemma1, "LEMMA1"},
    {BoundId::lemma1_coarse, "LEMMA1_COARSE"},
    {BoundId::talagrand, "TALAGRAND"},
    {BoundId::mendelson_vershynin, "MENDELSON_VERSHYNIN"},
    {BoundId::rudelson_vershynin_p, "RUDELSON_VERSHYNIN_P"},
    {BoundId::rudelson_vershynin_inf, "RUDELSON_VERSHYNIN_INF"},
    {BoundId::zhang, "ZHANG"},
    {BoundId::lemma11, "LEMMA11"},
    {BoundId::maurey, "MAUREY"},
};

inline std::string_view bound_name(BoundId id) {
  for (const auto& b : kBoundNames)
    if (b.id == id) return b.name;
  return "?";
}

inline BoundId parse_bound_id(std::string_view name) {
  for (const auto& b : kBoundNames)
    if (b.name == name) return b.id;
  throw std::invalid_argument("unknown bound id '" + std::string(name) + "'");
}

// Bounds that carry explicit constants and may be asserted against data.
inline bool bound_is_asserted(BoundId id) {
  return id == BoundId::thm1 || id == BoundId::thm4_blumer || id == BoundId::fat_hyp ||
         id == BoundId::lemma1 || id == BoundId::lemma1_coarse || id == BoundId::log2x || id == BoundId::log2y;
}

namespace detail {

inline double need(const std::optional<double>& v, BoundId id, const char* field) {
  if (!v) throw std::invalid_argument(std::string(bound_name(id)) + " requires parameter '" + field + "'");
  return *v;
}

inline double positive(double v, BoundId id, const char* field) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(bound_name(id)) + ": '" + field + "' must be positive");
  return v;
}

}  // namespace detail

/// Scale at which the component dimensions enter the DUAN bound: c gamma / sqrt(k).
inline double duan_scale(const BoundParams& p) {
  return p.c * detail::need(p.gamma, BoundId::duan, "gamma") / std::sqrt(detail::need(p.k, BoundId::duan, "k"));
}

inline double evaluate_bound(BoundId id, const BoundParams& p) {
  using detail::need;
  using detail::positive;
  switch (id) {
    case BoundId::thm1: {
      const double D = need(p.D, id, "D");
      if (D < 0) throw std::invalid_argument("THM1: D must be >= 0");
      if (D == 0) return 0.0;
      const double l = std::log(90 * D);
      return 25 * D * l * l;
    }
    case BoundId::thm2: {
      const double eps = need(p.epsilon, id, "epsilon");
      if (!(eps > 0.0 && eps < std::log(2.0))) throw std::invalid_argument("THM2: epsilon must lie in (0, log 2)");
      const double gamma = positive(need(p.gamma, id, "gamma"), id, "gamma");
      return p.C * need(p.D, id, "D") * std::pow(Log(need(p.R, id, "R") * need(p.k, id, "k") / gamma), 1 + eps);
    }
    case BoundId::thm3: {
      const double gamma = positive(need(p.gamma, id, "gamma"), id, "gamma");
      const double k = need(p.k, id, "k");
      double sum = 0.0;
      if (!p.R_list.empty()) {
        for (double r : p.R_list) sum += r * r;
      } else {
        const double R = need(p.R, id, "R");
        sum = k * R * R;
      }
      return p.c * Log(k) / (gamma * gamma) * sum;
    }
    case BoundId::thm4_blumer: {
      const double k = positive(need(p.k, id, "k"), id, "k");
      return 2 * (need(p.d, id, "d") + 1) * k * std::log(3 * k);
    }
    case BoundId::thm4:
      return p.c * need(p.d, id, "d") * need(p.k, id, "k") * Log(need(p.k, id, "k"));
    case BoundId::duan: {
      const double gamma = positive(need(p.gamma, id, "gamma"), id, "gamma");
      return p.C * std::log(need(p.k, id, "k") / gamma) * need(p.D, id, "D");
    }
    case BoundId::fat_hyp: {
      const double gamma = positive(need(p.gamma, id, "gamma"), id, "gamma");
      const double ratio = 3 * need(p.R, id, "R") / gamma;
      return std::min(need(p.d, id, "d") + 1, ratio * ratio);
    }
    case BoundId::log2x: {
      const double A = need(p.A, id, "A");
      return 3 * A * std::log(3 * A);
    }
    case BoundId::log2y: {
      const double A = need(p.A, id, "A");
      const double l = std::log(18 * A);
      return 5 * A * l * l;
    }
    case BoundId::conj2:
      return p.c * Log(need(p.k, id, "k")) * need(p.D, id, "D");
    case BoundId::lemma1: {
      const double n = positive(need(p.n, id, "n"), id, "n");
      return std::pow(n + 1, (need(p.d, id, "d") + 1) * std::log2(n) + 2);
    }
    case BoundId::lemma1_coarse: {
      const double n = need(p.n, id, "n");
      const double d = need(p.d, id, "d");
      if (!(d > 0 && n > 1)) throw std::invalid_argument("LEMMA1_COARSE needs d > 0 and n > 1");
      return std::pow(n, 5 * d * std::log2(n));
    }
    case BoundId::talagrand:
      return std::pow(2.0, p.C * need(p.D, id, "D"));
    case BoundId::mendelson_vershynin: {
      const double t = positive(need(p.t, id, "t"), id, "t");
      return std::pow(2.0 / t, p.C * need(p.D, id, "D"));
    }
    case BoundId::rudelson_vershynin_p: {
      const double t = positive(need(p.t, id, "t"), id, "t");
      const double pp = need(p.p, id, "p");
      return p.C * pp * pp * need(p.D, id, "D") * std::log(need(p.R, id, "R") / (p.c * t));
    }
    case BoundId::rudelson_vershynin_inf: {
      const double t = positive(need(p.t, id, "t"), id, "t");
      const double v = positive(need(p.D, id, "D"), id, "D");
      const double n = need(p.n, id, "n");
      const double eps = need(p.epsilon, id, "epsilon");
      return p.C * v * std::log(need(p.R, id, "R") * n / (v * t)) * std::pow(std::log(n / v), eps);
    }
    case BoundId::zhang: {
      const double t = positive(need(p.t, id, "t"), id, "t");
      const double R = need(p.R, id, "R");
      return p.C * R * R / (t * t) * Log(need(p.n, id, "n") * R / t);
    }
    case BoundId::lemma11: {
      const double t = positive(need(p.t, id, "t"), id, "t");
      const double R = need(p.R, id, "R");
      return p.C * R * R / (t * t) * Log(need(p.m, id, "m") * t / R);
    }
    case BoundId::maurey: {
      const double t = positive(need(p.t, id, "t"), id, "t");
      const double r = positive(need(p.R, id, "R"), id, "R");
      const double s = std::ceil(r * r / (t * t) - 1e-12);
      return std::pow(p.c + p.c * need(p.m, id, "m") * t * t / (r * r), s);
    }
  }
  throw std::invalid_argument("unhandled bound id");
}

struct ElementaryFactsReport {
  std::size_t samples = 0;
  std::size_t log2x_hypothesis_held = 0;
  std::size_t log2y_hypothesis_held = 0;
  // Largest relative (lhs - rhs) / max(1, |rhs|); <= 0 means no violation.
  double log2x = -1.0;
  double log2y = -1.0;
  double xlog = -1.0;       // sum v_i log(u/v_i) <= (sum v) log(uk / sum v)
  double xlog_eps = -1.0;   // same with log^{1+eps}, eps in [0, log 2], u >= 2, v_i in [1, u/2]

  double worst() const { return std::max({log2x, log2y, xlog, xlog_eps}); }
};

namespace detail {

inline double relative_excess(double lhs, double rhs) {
  return (lhs - rhs) / std::max({1.0, std::abs(rhs), std::abs(lhs)});
}

// Largest x >= 1 with x <= A g(x), for g growing slower than x; bisection on
// [x0, hi] where x0 satisfies the hypothesis.
template <class G>
double largest_fixed_point(double A, G g, double hi) {
  double lo = 1.0;
  for (double x = 2.0; x < hi; x *= 1.5)
    if (x <= A * g(x)) lo = x;
  if (!(lo <= A * g(lo))) return 1.0;
  while (hi <= A * g(hi)) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = (lo + hi) / 2;
    (mid <= A * g(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

/// Random admissible tuples for the implications x <= A log2 x => x <= 3A log(3A)
/// and y <= A log2^2 y => y <= 5A log^2(18A) (x, y, A >= 1), and the two
/// Jensen-type inequalities. Hypothesis boundaries are sampled explicitly.
inline ElementaryFactsReport check_elementary_facts(std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  ElementaryFactsReport rep;
  rep.samples = samples;
  auto log2sq = [](double y) { return std::log2(y) * std::log2(y); };
  for (std::size_t s = 0; s < samples; ++s) {
    const double A = std::exp(rng.uniform(0.0, std::log(1e4)));
    {
      const double rhs = 3 * A * std::log(3 * A);
      double x = std::exp(rng.uniform(0.0, std::log(4 * rhs + 4)));
      if (s % 8 == 0) x = detail::largest_fixed_point(A, [](double v) { return std::log2(v); }, 4 * rhs + 4);
      if (x <= A * std::log2(x)) {
        ++rep.log2x_hypothesis_held;
        rep.log2x = std::max(rep.log2x, detail::relative_excess(x, rhs));
      }
    }
    {
      const double l = std::log(18 * A);
      const double rhs = 5 * A * l * l;
      double y = std::exp(rng.uniform(0.0, std::log(4 * rhs + 4)));
      if (s % 8 == 0) y = detail::largest_fixed_point(A, log2sq, 4 * rhs + 4);
      if (y <= A * log2sq(y)) {
        ++rep.log2y_hypothesis_held;
        rep.log2y = std::max(rep.log2y, detail::relative_excess(y, rhs));
      }
    }
    const auto k = static_cast<std::size_t>(rng.uniform_int(1, 6));
    {
      const double u = std::exp(rng.uniform(std::log(1e-2), std::log(1e3)));
      std::vector<double> v(k);
      for (double& x : v) x = std::exp(rng.uniform(std::log(1e-3), std::log(1e3)));
      if (s % 5 == 0) std::fill(v.begin(), v.end(), v.front());
      double lhs = 0.0, sum = 0.0;
      for (double x : v) {
        lhs += x * std::log(u / x);
        sum += x;
      }
      const double rhs = sum * std::log(u * static_cast<double>(k) / sum);
      rep.xlog = std::max(rep.xlog, detail::relative_excess(lhs, rhs));
    }
    {
      const double eps = rng.uniform(0.0, std::log(2.0));
      const double u = s % 7 == 0 ? 2.0 : std::exp(rng.uniform(std::log(2.0), std::log(1e3)));
      std::vector<double> v(k);
      for (double& x : v) x = rng.uniform(1.0, u / 2);
      double lhs = 0.0, sum = 0.0;
      for (double x : v) {
        lhs += x * std::pow(std::log(u / x), 1 + eps);
        sum += x;
      }
      const double rhs = sum * std::pow(std::log(u * static_cast<double>(k) / sum), 1 + eps);
      rep.xlog_eps = std::max(rep.xlog_eps, detail::relative_excess(lhs, rhs));
    }
  }
  return rep;
}

}  // namespace fatmax

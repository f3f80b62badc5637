#include <gtest/gtest.h>

#include "fatmax/compose.hpp"
#include "fatmax/dims.hpp"
#include "fatmax/generators.hpp"
#include "oracles.hpp"

using namespace fatmax;

namespace {

using Rows = std::vector<std::vector<double>>;

ShatterCertificate one_point(double r, double gamma) { return {{0}, {r}, {1, 0}, gamma}; }

}  // namespace

TEST(Certificate, SinglePointChecks) {
  SampledClass F(Rows{{3}, {-3}});
  EXPECT_TRUE(check_certificate(F, one_point(0, 1), ShiftMode::zero));
  EXPECT_FALSE(check_certificate(F, one_point(0, 4), ShiftMode::zero));
  SampledClass G(Rows{{10}, {4}});
  EXPECT_TRUE(check_certificate(G, one_point(7, 2), ShiftMode::shifted));
  EXPECT_THROW(check_certificate(G, one_point(7, 2), ShiftMode::zero), std::invalid_argument);
}

TEST(Certificate, MalformedInputsThrow) {
  SampledClass F(Rows{{3}, {-3}});
  ShatterCertificate missing{{0}, {0}, {0}, 1};
  EXPECT_THROW(check_certificate(F, missing, ShiftMode::zero), std::invalid_argument);
  ShatterCertificate bad_row{{0}, {0}, {5, 0}, 1};
  EXPECT_THROW(check_certificate(F, bad_row, ShiftMode::zero), std::out_of_range);
  ShatterCertificate bad_shift{{0}, {}, {1, 0}, 1};
  EXPECT_THROW(check_certificate(F, bad_shift, ShiftMode::shifted), std::invalid_argument);
}

TEST(ShatterDecision, GapMidpoint) {
  SampledClass F(Rows{{10}, {4}});
  auto cert = shatter_decision(F, {0}, 2, ShiftMode::shifted);
  ASSERT_TRUE(cert);
  EXPECT_DOUBLE_EQ(cert->shift[0], 7.0);
  EXPECT_TRUE(check_certificate(F, *cert, ShiftMode::shifted));
  EXPECT_FALSE(shatter_decision(SampledClass(Rows{{5}, {4}}), {0}, 1, ShiftMode::shifted));
}

TEST(ShatterDecision, CubeZeroShift) {
  auto F = cube_class(2, 1.0);
  auto cert = shatter_decision(F, {0, 1}, 1, ShiftMode::zero);
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->witnesses, (std::vector<Index>{0, 1, 2, 3}));
  EXPECT_THROW(shatter_decision(F, {0}, 0.0, ShiftMode::zero), std::invalid_argument);
}

TEST(FatDim, CubeClasses) {
  for (std::size_t n = 1; n <= 6; ++n) {
    auto F = cube_class(n, 1.0);
    auto fat = fat_dim(F, 1.0);
    auto faat = faat_dim(F, 1.0);
    EXPECT_EQ(fat.dimension, n);
    EXPECT_EQ(faat.dimension, n);
    EXPECT_TRUE(fat.exact);
    ASSERT_TRUE(fat.certificate);
    EXPECT_TRUE(check_certificate(F, *fat.certificate, ShiftMode::shifted));
    ASSERT_TRUE(faat.certificate);
    EXPECT_TRUE(check_certificate(F, *faat.certificate, ShiftMode::zero));
    // A larger margin than the cube provides shatters nothing.
    EXPECT_EQ(fat_dim(F, 1.5).dimension, 0u);
  }
}

TEST(FatDim, SingleRowIsZero) {
  SampledClass F({{1, -5, 9}});
  EXPECT_EQ(fat_dim(F, 0.1).dimension, 0u);
  EXPECT_EQ(faat_dim(F, 0.1).dimension, 0u);
  EXPECT_FALSE(fat_dim(F, 0.1).certificate);
}

TEST(FatDim, ShiftedVersusZero) {
  // Shifted by +10 everywhere: fat is unchanged, the zero-shift version dies.
  auto F = cube_class(3, 1.0);
  std::vector<double> r(3, 10.0);
  auto G = shift_class(F, r);
  EXPECT_EQ(fat_dim(G, 1.0).dimension, 3u);
  EXPECT_EQ(faat_dim(G, 1.0).dimension, 0u);
}

TEST(FatDim, LexicographicallyFirstMaximum) {
  // Points 1 and 2 are shattered, point 0 is constant.
  SampledClass F({{0, -1, -1}, {0, 1, -1}, {0, -1, 1}, {0, 1, 1}});
  auto res = fat_dim(F, 1.0);
  ASSERT_EQ(res.dimension, 2u);
  EXPECT_EQ(res.certificate->subset, (IndexSet{1, 2}));
}

TEST(FatDim, MatchesDefinitionOracle) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto F = random_integer_class(6, 4, -3, 3, seed);
    EXPECT_EQ(fat_dim(F, 1.0).dimension, oracle::fat(F, 1.0)) << "seed " << seed;
    EXPECT_EQ(faat_dim(F, 1.0).dimension, oracle::fat(F, 1.0, true)) << "seed " << seed;
  }
}

TEST(FatDim, LargerClassesMatchOracle) {
  for (std::uint64_t seed = 100; seed < 115; ++seed) {
    auto F = random_grid_class(18, 4, -2, 2, 0.5, seed);
    EXPECT_EQ(fat_dim(F, 0.5).dimension, oracle::fat(F, 0.5)) << "seed " << seed;
    EXPECT_EQ(faat_dim(F, 0.5).dimension, oracle::fat(F, 0.5, true)) << "seed " << seed;
  }
}

TEST(FatDim, BudgetGivesFlaggedLowerBound) {
  auto F = cube_class(6, 1.0);
  SearchLimits limits;
  limits.node_budget = 30;
  auto res = fat_dim(F, 1.0, limits);
  EXPECT_FALSE(res.exact);
  EXPECT_LE(res.dimension, 6u);
  if (res.certificate) {
    EXPECT_TRUE(check_certificate(F, *res.certificate, ShiftMode::shifted));
  }
}

TEST(FatDim, DomainLimit) {
  SearchLimits limits;
  limits.max_domain = 2;
  EXPECT_THROW(fat_dim(cube_class(3, 1.0), 1.0, limits), std::invalid_argument);
}

TEST(VcPartial, Examples) {
  EXPECT_EQ(vc_dim_partial(partial_from_strings({"11*", "0*1"})).dimension, 1u);
  EXPECT_EQ(vc_dim_partial(partial_from_strings({"0*", "**"})).dimension, 0u);
  auto cube = partial_from_strings({"00", "01", "10", "11"});
  auto res = vc_dim_partial(cube);
  EXPECT_EQ(res.dimension, 2u);
  ASSERT_TRUE(res.certificate);
  EXPECT_TRUE(check_vc_certificate(cube, *res.certificate));
}

TEST(VcPartial, MatchesOracle) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    auto P = random_partial_class(8, 4, 0.3, seed);
    auto res = vc_dim_partial(P);
    EXPECT_EQ(res.dimension, oracle::vc(P)) << "seed " << seed;
    if (res.certificate) {
      EXPECT_TRUE(check_vc_certificate(P, *res.certificate));
    }
  }
}

TEST(FaatIdentity, EqualsVcOfDiscretization) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    auto F = random_integer_class(8, 4, -3, 3, seed);
    for (double gamma : {0.5, 1.0, 2.0})
      EXPECT_EQ(faat_dim(F, gamma).dimension, vc_dim_partial(discretize_class(F, DiscretizerSpec(gamma))).dimension)
          << "seed " << seed << " gamma " << gamma;
  }
}

TEST(ShiftScan, AgreesWithFatDim) {
  auto cube = cube_class(2, 1.0);
  EXPECT_EQ(fat_via_shift_scan(cube, 1.0).dimension, 2u);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto F = random_integer_class(7, 4, -3, 3, seed);
    auto scan = fat_via_shift_scan(F, 1.0);
    EXPECT_EQ(scan.dimension, fat_dim(F, 1.0).dimension) << "seed " << seed;
    if (scan.certificate) {
      EXPECT_TRUE(check_certificate(F, *scan.certificate, ShiftMode::shifted));
    }
  }
}

TEST(ShiftScan, ColumnShiftInvariance) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto F = random_integer_class(8, 3, -3, 3, seed);
    std::vector<double> r{100.0, 0.0, 0.0};
    auto G = shift_class(F, r);
    EXPECT_EQ(fat_via_shift_scan(G, 1.0).dimension, fat_via_shift_scan(F, 1.0).dimension);
    EXPECT_EQ(fat_dim(G, 1.0).dimension, fat_dim(F, 1.0).dimension);
  }
}

TEST(ZeroShift, SinglePointArithmetic) {
  SampledClass F(Rows{{10}, {4}});
  auto res = zero_shift_certificate(F, one_point(7, 2));
  EXPECT_DOUBLE_EQ(res.functions.at(1, 0), 3.0);
  EXPECT_DOUBLE_EQ(res.functions.at(0, 0), -3.0);
  EXPECT_TRUE(check_certificate(res.functions, res.certificate, ShiftMode::zero));
}

TEST(ZeroShift, CubeReproducesWitnesses) {
  auto F = cube_class(3, 1.0);
  auto cert = fat_dim(F, 1.0).certificate;
  ASSERT_TRUE(cert);
  cert->shift.assign(3, 0.0);
  auto res = zero_shift_certificate(F, *cert);
  for (std::size_t y = 0; y < 8; ++y)
    for (Index x = 0; x < 3; ++x) EXPECT_EQ(res.functions.at(y, x), F.at(cert->witnesses[y], x));
  for (bool m : res.membership) EXPECT_TRUE(m);
}

TEST(ZeroShift, SymmetricClassMembership) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto B = random_integer_class(6, 3, -4, 4, seed);
    auto cert = fat_dim(B, 1.0).certificate;
    if (!cert) continue;
    auto closure = half_difference_closure(B);
    auto res = zero_shift_certificate(closure, *cert);
    EXPECT_TRUE(check_certificate(res.functions, res.certificate, ShiftMode::zero));
    for (bool m : res.membership) EXPECT_TRUE(m) << "seed " << seed;
  }
}

TEST(ZeroShift, RejectsInvalidCertificate) {
  SampledClass F(Rows{{10}, {4}});
  EXPECT_THROW(zero_shift_certificate(F, one_point(7, 4)), std::invalid_argument);
}

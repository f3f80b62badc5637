#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fatmax/core.hpp"
#include "fatmax/rng.hpp"

using namespace fatmax;

TEST(SampledClass, StoresRowsAndDomain) {
  SampledClass F({"a", "b"}, {{1, 2}, {3, 4}, {1, 2}});
  EXPECT_EQ(F.rows(), 3u);
  EXPECT_EQ(F.cols(), 2u);
  EXPECT_EQ(F.at(1, 0), 3.0);
  EXPECT_EQ(F.row(2)[1], 2.0);
  EXPECT_EQ(F.domain()[1], "b");
}

TEST(SampledClass, DefaultLabels) {
  SampledClass F({{0.5, 1.0, 1.5}});
  ASSERT_EQ(F.cols(), 3u);
  EXPECT_EQ(F.domain()[2], "x2");
}

TEST(SampledClass, RejectsBadShapes) {
  EXPECT_THROW(SampledClass({{1, 2}, {3}}), SchemaError);
  EXPECT_THROW(SampledClass(std::vector<std::vector<double>>{}), SchemaError);
  EXPECT_THROW(SampledClass({"a"}, {}), SchemaError);
  EXPECT_THROW(SampledClass({{1, std::numeric_limits<double>::quiet_NaN()}}), SchemaError);
  EXPECT_THROW(SampledClass({{1, std::numeric_limits<double>::infinity()}}), SchemaError);
}

TEST(SampledClass, RestrictKeepsRowOrder) {
  SampledClass F({{1, 2, 3}, {4, 5, 6}});
  auto G = restrict(F, {0, 2});
  EXPECT_EQ(G.to_rows(), (std::vector<std::vector<double>>{{1, 3}, {4, 6}}));
  EXPECT_EQ(G.domain(), (std::vector<std::string>{"x0", "x2"}));
  EXPECT_THROW(restrict(F, {}), std::invalid_argument);
  EXPECT_THROW(restrict(F, {3}), std::out_of_range);
}

TEST(SampledClass, DedupKeepsFirstOccurrence) {
  SampledClass F({{1, 2}, {0, 0}, {1, 2}, {0, 0}, {3, 3}});
  auto G = dedup_rows(F);
  EXPECT_EQ(G.to_rows(), (std::vector<std::vector<double>>{{1, 2}, {0, 0}, {3, 3}}));
}

TEST(Discretizer, MapsIntoThreeLabels) {
  DiscretizerSpec spec(0.5);
  EXPECT_EQ(discretize(-0.5, spec), Label::zero);
  EXPECT_EQ(discretize(-2.0, spec), Label::zero);
  EXPECT_EQ(discretize(0.5, spec), Label::one);
  EXPECT_EQ(discretize(0.49, spec), Label::star);
  EXPECT_EQ(discretize(0.0, spec), Label::star);
  EXPECT_THROW(DiscretizerSpec(0.0), std::invalid_argument);
  EXPECT_THROW(DiscretizerSpec(-1.0), std::invalid_argument);
}

TEST(Discretizer, ClassImage) {
  SampledClass F({{-1, 0, 1}, {2, -0.2, 0.3}});
  auto P = discretize_class(F, DiscretizerSpec(0.5));
  EXPECT_EQ(row_string(P.row_data()[0]), "0*1");
  EXPECT_EQ(row_string(P.row_data()[1]), "1**");
}

TEST(PartialClass, ParsesAndValidates) {
  auto P = partial_from_strings({"01*", "1*0"});
  EXPECT_EQ(P.rows(), 2u);
  EXPECT_EQ(P.at(0, 2), Label::star);
  EXPECT_FALSE(P.is_total());
  EXPECT_TRUE(partial_from_strings({"01", "10"}).is_total());
  EXPECT_THROW(parse_row("012"), SchemaError);
  EXPECT_THROW(partial_from_strings({"01", "1"}), SchemaError);
}

TEST(PartialClass, DistinctRows) {
  auto P = partial_from_strings({"0*", "0*", "01"});
  EXPECT_EQ(distinct_row_count(P), 2u);
}

TEST(Measure, ValidatesWeights) {
  EXPECT_NO_THROW(Measure({0.25, 0.75}));
  EXPECT_THROW(Measure({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(Measure({-0.5, 1.5}), std::invalid_argument);
  auto u = Measure::uniform(4);
  EXPECT_DOUBLE_EQ(u[3], 0.25);
}

TEST(Rng, DeterministicAcrossInstances) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  Rng c(42);
  for (int i = 0; i < 1000; ++i) {
    auto v = c.uniform_int(-3, 3);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 3);
    double u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(Rng::derive(1, 0), Rng::derive(1, 1));
}

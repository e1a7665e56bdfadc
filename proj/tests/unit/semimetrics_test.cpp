#include "fextq/semimetrics.hpp"

#include "fextq/models.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>

using namespace fextq;

TEST(SemiMetrics, ParseAndName)
{
  EXPECT_EQ(parse_semimetric("l2"), SemiMetricKind::l2);
  EXPECT_EQ(parse_semimetric("normdiff"), SemiMetricKind::norm_diff);
  EXPECT_EQ(parse_semimetric("d2"), SemiMetricKind::second_deriv);
  EXPECT_THROW(parse_semimetric("linf"), std::invalid_argument);
  EXPECT_EQ(to_string(SemiMetricKind::norm_diff), "normdiff");
}

TEST(SemiMetrics, L2OfConstantDifference)
{
  const Grid g = Grid::uniform(0.0, 2.0, 11);
  const std::vector<double> a(11, 3.0);
  const std::vector<double> b(11, 1.0);
  // integral of 2^2 over [0, 2] is 8
  EXPECT_NEAR(distance(SemiMetricKind::l2, a, b, g), std::sqrt(8.0), 1e-14);
}

TEST(SemiMetrics, NormDiffVanishesBetweenDistinctCurves)
{
  const CosineCovariateProcess p(100);
  const auto a = p.curve(0.25);
  const auto b = p.curve(0.5);
  EXPECT_GT(distance(SemiMetricKind::l2, a, b, p.grid()), 0.1);
  EXPECT_NEAR(distance(SemiMetricKind::norm_diff, a, b, p.grid()), 0.0, 1e-12);
}

TEST(SemiMetrics, SecondDerivativeIsIndexBased)
{
  // x_l = l^2 has constant second difference 2; against zero over m - 2 interior points
  std::vector<double> a(6);
  for (std::size_t l = 0; l < 6; ++l)
    a[l] = static_cast<double>(l * l);
  const std::vector<double> z(6, 0.0);
  const double expected = std::sqrt(4.0 * 4.0);
  EXPECT_DOUBLE_EQ(distance(SemiMetricKind::second_deriv, a, z, Grid::unit_spaced(6)), expected);
  EXPECT_DOUBLE_EQ(distance(SemiMetricKind::second_deriv, a, z, Grid::uniform(0.0, 0.01, 6)), expected);
  // linear curves are invisible
  std::vector<double> lin{ 1, 2, 3, 4, 5, 6 };
  EXPECT_EQ(distance(SemiMetricKind::second_deriv, lin, z, Grid::unit_spaced(6)), 0.0);
  EXPECT_THROW(distance(SemiMetricKind::second_deriv, std::vector<double>{ 1, 2 }, std::vector<double>{ 0, 0 },
                        Grid::unit_spaced(2)),
               std::invalid_argument);
}

TEST(SemiMetrics, SizeMismatchThrows)
{
  EXPECT_THROW(distance(SemiMetricKind::l2, std::vector<double>{ 1, 2 }, std::vector<double>{ 1, 2, 3 },
                        Grid::unit_spaced(3)),
               std::invalid_argument);
}

class SemiMetricProperties : public ::testing::TestWithParam<SemiMetricKind>
{};

TEST_P(SemiMetricProperties, SymmetricNonnegativeZeroOnDiagonal)
{
  const auto d = fixtures::random_dataset(25, 30, 42);
  const DistanceMatrix D(d, GetParam());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(D(i, i), 0.0);
    for (std::size_t j = 0; j < d.size(); ++j) {
      EXPECT_GE(D(i, j), 0.0);
      EXPECT_EQ(D(i, j), D(j, i));
      EXPECT_DOUBLE_EQ(D(i, j), distance(GetParam(), d.curve(i), d.curve(j), d.grid()));
    }
  }
  const auto to0 = distances_to(d, d.curve(0), GetParam());
  for (std::size_t j = 0; j < d.size(); ++j)
    EXPECT_DOUBLE_EQ(to0[j], D(0, j));
}

INSTANTIATE_TEST_SUITE_P(AllKinds,
                         SemiMetricProperties,
                         ::testing::Values(SemiMetricKind::l2, SemiMetricKind::norm_diff, SemiMetricKind::second_deriv),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(DistanceMatrix, ArgmaxPairAndQuantiles)
{
  const Grid g = Grid::unit_spaced(2);
  const Dataset d(g, std::vector<double>{ 0, 0, 1, 1, 5, 5 }, { 1, 2, 3 });
  const DistanceMatrix D(d, SemiMetricKind::l2);
  EXPECT_EQ(D.argmax_pair(), std::make_pair(std::size_t{ 0 }, std::size_t{ 2 }));
  EXPECT_DOUBLE_EQ(D.pair_quantile(0.0), 1.0);
  EXPECT_DOUBLE_EQ(D.pair_quantile(1.0), 5.0);
}

TEST(SquaredNorm, CosineClosedForm)
{
  const CosineCovariateProcess p(100);
  for (double z = 0.25; z <= 1.0; z += 0.01)
    EXPECT_NEAR(squared_norm(p.curve(z), p.grid()), CosineCovariateProcess::squared_norm_closed_form(z), 1e-4) << z;
}

#include "fextq/estimator.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace fextq;

namespace {

ConditionalSurvival single(double y, double lambda = 0.1)
{
  const std::vector<double> ys{ y };
  const std::vector<double> w{ 1.0 };
  return ConditionalSurvival(ys, w, lambda);
}

} // namespace

TEST(LocalWeights, EmptyNeighbourhoodCarriesNearestDistance)
{
  const std::vector<double> d{ 0.5, 0.3, 0.9 };
  try {
    local_weights(d, 0.2, CovariateKernel::linear());
    FAIL();
  } catch (const EmptyNeighborhood& e) {
    EXPECT_DOUBLE_EQ(e.nearest_distance(), 0.3);
    EXPECT_DOUBLE_EQ(e.bandwidth(), 0.2);
  }
}

TEST(LocalWeights, ValuesAndTotals)
{
  const std::vector<double> d{ 0.0, 0.05, 0.1, 0.2 };
  const auto lw = local_weights(d, 0.1, CovariateKernel::linear());
  EXPECT_DOUBLE_EQ(lw.weights[0], 1.9);
  EXPECT_DOUBLE_EQ(lw.weights[1], 1.0);
  EXPECT_NEAR(lw.weights[2], 0.1, 1e-15);
  EXPECT_EQ(lw.weights[3], 0.0);
  const auto u = local_weights(d, 0.1, CovariateKernel::uniform());
  EXPECT_EQ(u.total, 3.0);
}

TEST(Csf, SinglePointExamples)
{
  const auto s = single(5.0);
  EXPECT_EQ(s(5.0 - 0.2), 1.0);
  EXPECT_EQ(s(5.0), 0.5);
  EXPECT_EQ(s(5.2), 0.0);
}

TEST(Csf, TwoPointsStraddling)
{
  const std::vector<double> ys{ 10.0, 0.0 };
  const std::vector<double> w{ 1.0, 1.0 };
  const ConditionalSurvival s(ys, w, 0.1);
  EXPECT_EQ(s(5.0), 0.5);
}

TEST(Quantile, SinglePointMedianIsThePoint)
{
  EXPECT_NEAR(single(3.0).quantile(0.5), 3.0, 1e-9);
}

TEST(Quantile, TwoPointsQuarter)
{
  const std::vector<double> ys{ 0.0, 10.0 };
  const std::vector<double> w{ 1.0, 1.0 };
  const ConditionalSurvival s(ys, w, 0.1);
  EXPECT_NEAR(s.quantile(0.25), 10.0, 1e-8);
}

TEST(Quantile, NeverExceedsUpperBracket)
{
  const auto d = fixtures::random_dataset(40, 10, 3);
  EstimatorConfig cfg;
  cfg.h = 10.0;
  const auto s = conditional_survival(d, d.curve(0), cfg);
  EXPECT_LE(s.quantile(1e-12), s.max_response() + cfg.lambda);
  EXPECT_THROW(s.quantile(0.0), std::invalid_argument);
  EXPECT_THROW(s.quantile(1.0), std::invalid_argument);
}

TEST(Quantile, LeftmostCrossingOnFlatSegment)
{
  // csf equals exactly 1/2 on [1.1, 2.9]; the infimum is the left end.
  const std::vector<double> ys{ 1.0, 3.0 };
  const std::vector<double> w{ 1.0, 1.0 };
  const ConditionalSurvival s(ys, w, 0.1);
  EXPECT_NEAR(s.quantile(0.5), 1.1, 1e-8);
}

TEST(Standardization, UniformKernelCollapses)
{
  std::vector<double> d(100, 1.0);
  for (int i = 0; i < 20; ++i)
    d[static_cast<std::size_t>(i)] = 0.01;
  const auto st = standardization(d, 0.1, CovariateKernel::uniform(), QuantileOrder{ 0.05 });
  EXPECT_DOUBLE_EQ(st.phi_hat, 0.2);
  EXPECT_DOUBLE_EQ(st.mu1_hat, 0.2);
  EXPECT_DOUBLE_EQ(st.mu2_hat, 0.2);
  EXPECT_NEAR(st.sigma_n, 1.0, 1e-15);
  EXPECT_TRUE(std::isnan(st.lambda_n));
  const auto lv = standardization(d, 0.1, CovariateKernel::uniform(), SurvivalLevel{ 0.05 });
  EXPECT_NEAR(lv.lambda_n, 1.0, 1e-15);
}

TEST(Standardization, LinearKernelMomentBounds)
{
  const auto data = fixtures::random_dataset(200, 20, 9);
  const auto d = distances_to(data, data.curve(3), SemiMetricKind::l2);
  const auto st = standardization(d, 0.3, CovariateKernel::linear(), QuantileOrder{ 0.1 });
  EXPECT_GE(st.mu2_hat, 0.01 * st.phi_hat);
  EXPECT_LE(st.mu2_hat, 1.9 * 1.9 * st.phi_hat);
  auto shifted = d;
  for (double& v : shifted)
    v += 1.0;
  EXPECT_THROW(standardization(shifted, 0.5, CovariateKernel::linear(), QuantileOrder{ 0.1 }), EmptyNeighborhood);
}

TEST(EstimatorConfig, Validation)
{
  EstimatorConfig cfg;
  cfg.h = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.h = 0.1;
  cfg.lambda = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Csf, DatasetEntryPointsAgree)
{
  const auto data = fixtures::random_dataset(60, 12, 2);
  EstimatorConfig cfg;
  cfg.h = 0.5;
  const auto x = data.curve(7);
  const auto surv = conditional_survival(data, x, cfg);
  EXPECT_EQ(csf(data, x, 1.5, cfg), surv(1.5));
  EXPECT_EQ(quantile(data, x, 0.2, cfg), surv.quantile(0.2));
}

#include "fextq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fextq::stats {

double quantile(std::vector<double> values, double p)
{
  if (values.empty())
    throw std::invalid_argument("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("quantile probability outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double mean(std::span<const double> x)
{
  if (x.empty())
    throw std::invalid_argument("mean of an empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double covariance(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("covariance needs two samples of equal size >= 2");
  const double mx = mean(x);
  const double my = mean(y);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += (x[i] - mx) * (y[i] - my);
  return acc / static_cast<double>(x.size() - 1);
}

double sd(std::span<const double> x)
{
  return std::sqrt(covariance(x, x));
}

double correlation(std::span<const double> x, std::span<const double> y)
{
  return covariance(x, y) / (sd(x) * sd(y));
}

double normal_cdf(double z)
{
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double ks_distance_normal(std::vector<double> z)
{
  if (z.empty())
    throw std::invalid_argument("KS distance of an empty sample");
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = normal_cdf(z[i]);
    worst = std::max({ worst,
                       std::abs(static_cast<double>(i + 1) / n - f),
                       std::abs(f - static_cast<double>(i) / n) });
  }
  return worst;
}

} // namespace fextq::stats

#include "fextq/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace fextq {

void EstimatorConfig::validate() const
{
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("bandwidth h must be positive and finite, got " + format_double(h));
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("bandwidth lambda must be positive and finite, got " +
                                format_double(lambda));
}

EmptyNeighborhood::EmptyNeighborhood(double h, double nearest_distance)
  : std::runtime_error("empty neighborhood: no observation within h=" + format_double(h) +
                       " (nearest distance " + format_double(nearest_distance) + ")")
  , h_(h)
  , nearest_(nearest_distance)
{}

LocalWeights local_weights(std::span<const double> distances, double h, const CovariateKernel& kernel)
{
  if (!(h > 0.0))
    throw std::invalid_argument("bandwidth h must be positive");
  LocalWeights out;
  out.weights.resize(distances.size());
  for (std::size_t i = 0; i < distances.size(); ++i) {
    out.weights[i] = kernel(distances[i] / h);
    out.total += out.weights[i];
  }
  if (!(out.total > 0.0)) {
    double nearest = std::numeric_limits<double>::infinity();
    for (double d : distances)
      nearest = std::min(nearest, d);
    throw EmptyNeighborhood(h, nearest);
  }
  return out;
}

LocalWeights local_weights(const Dataset& data, std::span<const double> x, const EstimatorConfig& cfg)
{
  cfg.validate();
  auto d = distances_to(data, x, cfg.semimetric);
  return local_weights(d, cfg.h, cfg.kernel);
}

ConditionalSurvival::ConditionalSurvival(std::span<const double> responses,
                                         std::span<const double> weights,
                                         double lambda,
                                         ResponseKernel kernel)
  : lambda_(lambda)
  , kernel_(kernel)
{
  if (responses.size() != weights.size())
    throw std::invalid_argument("responses and weights differ in length");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("bandwidth lambda must be positive and finite");

  std::vector<std::size_t> idx;
  idx.reserve(responses.size());
  for (std::size_t i = 0; i < responses.size(); ++i) {
    if (weights[i] > 0.0)
      idx.push_back(i);
  }
  if (idx.empty())
    throw EmptyNeighborhood(std::numeric_limits<double>::quiet_NaN(), 0.0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return responses[a] < responses[b] || (responses[a] == responses[b] && a < b);
  });

  y_.resize(idx.size());
  w_.resize(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    y_[k] = responses[idx[k]];
    w_[k] = weights[idx[k]];
  }
  w_above_.assign(idx.size() + 1, 0.0);
  for (std::size_t k = idx.size(); k-- > 0;)
    w_above_[k] = w_above_[k + 1] + w_[k];
  total_ = w_above_[0];
}

double ConditionalSurvival::operator()(double y) const
{
  const auto lo = std::lower_bound(y_.begin(), y_.end(), y - lambda_);
  const auto hi = std::lower_bound(lo, y_.end(), y + lambda_);
  const auto hi_idx = static_cast<std::size_t>(hi - y_.begin());
  double acc = w_above_[hi_idx];
  for (auto it = lo; it != hi; ++it) {
    const auto k = static_cast<std::size_t>(it - y_.begin());
    acc += w_[k] * kernel_.cdf((y_[k] - y) / lambda_);
  }
  return std::clamp(acc / total_, 0.0, 1.0);
}

double ConditionalSurvival::quantile(double alpha, double rel_tol) const
{
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("quantile order must lie in (0, 1), got " + format_double(alpha));
  // Invariant: survival(lo) > alpha >= survival(hi).
  double lo = y_.front() - lambda_;
  double hi = y_.back() + lambda_;
  const double tol = rel_tol * (1.0 + (hi - lo));
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi)
      break;
    if ((*this)(mid) <= alpha)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

ConditionalSurvival conditional_survival(std::span<const double> responses,
                                         std::span<const double> distances,
                                         const EstimatorConfig& cfg)
{
  cfg.validate();
  auto lw = local_weights(distances, cfg.h, cfg.kernel);
  return ConditionalSurvival(responses, lw.weights, cfg.lambda, cfg.response_kernel);
}

ConditionalSurvival conditional_survival(const Dataset& data,
                                         std::span<const double> x,
                                         const EstimatorConfig& cfg)
{
  cfg.validate();
  auto d = distances_to(data, x, cfg.semimetric);
  return conditional_survival(data.responses(), d, cfg);
}

double csf(const Dataset& data, std::span<const double> x, double y, const EstimatorConfig& cfg)
{
  return conditional_survival(data, x, cfg)(y);
}

double quantile(const Dataset& data, std::span<const double> x, double alpha, const EstimatorConfig& cfg)
{
  return conditional_survival(data, x, cfg).quantile(alpha);
}

double kernel_moment(std::span<const double> distances, double h, const CovariateKernel& kernel, double tau)
{
  if (distances.empty())
    throw std::invalid_argument("kernel moment of an empty sample");
  double acc = 0.0;
  for (double d : distances) {
    const double k = kernel(d / h);
    if (k > 0.0)
      acc += std::pow(k, tau);
  }
  return acc / static_cast<double>(distances.size());
}

Standardization standardization(std::span<const double> distances,
                                double h,
                                const CovariateKernel& kernel,
                                std::variant<QuantileOrder, SurvivalLevel> level)
{
  if (!(h > 0.0))
    throw std::invalid_argument("bandwidth h must be positive");
  const auto n = static_cast<double>(distances.size());
  std::size_t inside = 0;
  double s1 = 0.0;
  double s2 = 0.0;
  double nearest = std::numeric_limits<double>::infinity();
  for (double d : distances) {
    nearest = std::min(nearest, d);
    if (d <= h)
      ++inside;
    const double k = kernel(d / h);
    s1 += k;
    s2 += k * k;
  }
  if (!(s1 > 0.0))
    throw EmptyNeighborhood(h, nearest);

  Standardization out;
  out.phi_hat = static_cast<double>(inside) / n;
  out.mu1_hat = s1 / n;
  out.mu2_hat = s2 / n;
  out.effective_size = n * out.mu1_hat * out.mu1_hat / out.mu2_hat;
  out.sigma_n = std::numeric_limits<double>::quiet_NaN();
  out.lambda_n = std::numeric_limits<double>::quiet_NaN();
  if (const auto* q = std::get_if<QuantileOrder>(&level)) {
    if (!(q->alpha > 0.0 && q->alpha < 1.0))
      throw std::invalid_argument("quantile order must lie in (0, 1)");
    out.sigma_n = 1.0 / std::sqrt(out.effective_size * q->alpha);
  } else {
    const double f = std::get<SurvivalLevel>(level).survival;
    if (!(f > 0.0 && f <= 1.0))
      throw std::invalid_argument("survival level must lie in (0, 1]");
    out.lambda_n = 1.0 / std::sqrt(out.effective_size * f);
  }
  return out;
}

Standardization standardization(const Dataset& data,
                                std::span<const double> x,
                                std::variant<QuantileOrder, SurvivalLevel> level,
                                const EstimatorConfig& cfg)
{
  cfg.validate();
  auto d = distances_to(data, x, cfg.semimetric);
  return standardization(d, cfg.h, cfg.kernel, level);
}

} // namespace fextq

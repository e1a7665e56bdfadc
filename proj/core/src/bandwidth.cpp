#include "fextq/bandwidth.hpp"

#include "fextq/parallel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fextq {

BandwidthGrid::BandwidthGrid(std::vector<double> values)
  : values_(std::move(values))
{
  if (values_.empty())
    throw std::invalid_argument("bandwidth grid is empty");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!(values_[k] > 0.0) || !std::isfinite(values_[k]))
      throw std::invalid_argument("bandwidth grid values must be positive and finite");
    if (k > 0 && !(values_[k] > values_[k - 1]))
      throw std::invalid_argument("bandwidth grid must be strictly increasing");
  }
}

BandwidthGrid BandwidthGrid::regular(double lo, double hi, std::size_t M)
{
  if (M == 0)
    throw std::invalid_argument("bandwidth grid needs M >= 1");
  if (M > 1 && !(hi > lo))
    throw std::invalid_argument("bandwidth grid needs lo < hi");
  std::vector<double> v(M);
  for (std::size_t k = 0; k < M; ++k)
    v[k] = M == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(M - 1);
  if (M > 1)
    v.back() = hi;
  return BandwidthGrid(std::move(v));
}

BandwidthGrid BandwidthGrid::from_distance_quantiles(const DistanceMatrix& distances,
                                                     double p_lo,
                                                     double p_hi,
                                                     std::size_t M)
{
  if (!(p_lo >= 0.0 && p_lo < p_hi && p_hi <= 1.0))
    throw std::invalid_argument("distance quantile levels must satisfy 0 <= p_lo < p_hi <= 1");
  const double lo = distances.pair_quantile(p_lo);
  const double hi = distances.pair_quantile(p_hi);
  if (!(lo > 0.0) || !(hi > lo))
    throw std::invalid_argument("pairwise distance quantiles [" + format_double(lo) + ", " +
                                format_double(hi) + "] do not span a usable bandwidth range");
  return regular(lo, hi, M);
}

double cv_score(const DistanceMatrix& distances,
                std::span<const double> responses,
                double h,
                const EstimatorConfig& cfg)
{
  const std::size_t n = responses.size();
  if (n < 2)
    throw std::invalid_argument("cross-validation needs at least two observations");
  if (distances.size() != n)
    throw std::invalid_argument("distance matrix and responses differ in size");
  if (!(h > 0.0))
    throw std::invalid_argument("bandwidth h must be positive");

  std::vector<double> w(n);
  double score = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = distances.row(i);
    bool any = false;
    for (std::size_t k = 0; k < n; ++k) {
      w[k] = k == i ? 0.0 : cfg.kernel(row[k] / h);
      any = any || w[k] > 0.0;
    }
    const double yi = responses[i];
    if (!any) {
      for (std::size_t j = 0; j < n; ++j) {
        const double r = (yi >= responses[j] ? 1.0 : 0.0) - 0.5;
        score += r * r;
      }
      continue;
    }
    const ConditionalSurvival surv(responses, w, cfg.lambda, cfg.response_kernel);
    for (std::size_t j = 0; j < n; ++j) {
      const double r = (yi >= responses[j] ? 1.0 : 0.0) - surv(responses[j]);
      score += r * r;
    }
  }
  return score;
}

CvResult cv_bandwidth(const DistanceMatrix& distances,
                      std::span<const double> responses,
                      const BandwidthGrid& grid,
                      const EstimatorConfig& cfg,
                      std::size_t threads)
{
  if (responses.size() < 2)
    throw std::invalid_argument("cross-validation needs at least two observations");
  CvResult out;
  out.grid.assign(grid.values().begin(), grid.values().end());
  out.scores.assign(out.grid.size(), 0.0);
  parallel_for(out.grid.size(), threads, [&](std::size_t k) {
    out.scores[k] = cv_score(distances, responses, out.grid[k], cfg);
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < out.scores.size(); ++k) {
    if (out.scores[k] < out.scores[best])
      best = k;
  }
  out.h_opt = out.grid[best];
  return out;
}

CvResult cv_bandwidth(const Dataset& data,
                      const BandwidthGrid& grid,
                      const EstimatorConfig& cfg,
                      std::size_t threads)
{
  if (data.size() < 2)
    throw std::invalid_argument("cross-validation needs at least two observations");
  const DistanceMatrix distances(data, cfg.semimetric);
  return cv_bandwidth(distances, data.responses(), grid, cfg, threads);
}

} // namespace fextq

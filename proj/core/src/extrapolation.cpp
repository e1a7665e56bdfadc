#include "fextq/extrapolation.hpp"

#include <cmath>
#include <stdexcept>

namespace fextq {

void WeissmanQuery::validate() const
{
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("anchor order alpha must lie in (0, 1), got " + format_double(alpha));
  if (!(beta > 0.0))
    throw std::invalid_argument("target order beta must be positive, got " + format_double(beta));
  if (!(beta < alpha))
    throw std::invalid_argument("target order beta=" + format_double(beta) +
                                " must be smaller than anchor order alpha=" + format_double(alpha));
  if (gamma_override && !(*gamma_override > 0.0 && std::isfinite(*gamma_override)))
    throw std::invalid_argument("gamma override must be positive and finite");
}

double weissman_extrapolate(double anchor_quantile, double alpha, double beta, double gamma)
{
  if (!(beta > 0.0 && beta <= alpha))
    throw std::invalid_argument("extrapolation needs 0 < beta <= alpha");
  return anchor_quantile * std::pow(alpha / beta, gamma);
}

WeissmanEstimate weissman_quantile(const ConditionalSurvival& survival,
                                   const WeissmanQuery& query,
                                   const TailIndexSpec& spec)
{
  query.validate();
  WeissmanEstimate out;
  out.anchor_quantile = survival.quantile(query.alpha);
  out.gamma = query.gamma_override ? *query.gamma_override : estimate_gamma(survival, query.alpha, spec);
  out.quantile = weissman_extrapolate(out.anchor_quantile, query.alpha, query.beta, out.gamma);
  return out;
}

WeissmanEstimate weissman_quantile(const Dataset& data,
                                   std::span<const double> x,
                                   const WeissmanQuery& query,
                                   const EstimatorConfig& cfg,
                                   const TailIndexSpec& spec)
{
  query.validate();
  return weissman_quantile(conditional_survival(data, x, cfg), query, spec);
}

double weissman_log_sd(const TailIndexSpec& spec, double gamma, double sigma_n, double alpha, double beta)
{
  return std::sqrt(asymptotic_variance(spec, gamma)) * sigma_n * std::log(alpha / beta);
}

double default_anchor_order(std::size_t n, double c)
{
  if (n < 2)
    throw std::invalid_argument("sample size must be at least 2");
  if (!(c > 0.0))
    throw std::invalid_argument("anchor constant c must be positive");
  const auto nn = static_cast<double>(n);
  return c * std::log(nn) / nn;
}

} // namespace fextq

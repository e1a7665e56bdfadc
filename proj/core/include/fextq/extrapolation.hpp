#pragma once

#include "fextq/estimator.hpp"
#include "fextq/tail_index.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace fextq {

//! Anchor order alpha, target order beta and an optional fixed tail index.
struct WeissmanQuery
{
  double alpha = 0.0;
  double beta = 0.0;
  //! When set, used instead of estimating gamma at the anchor.
  std::optional<double> gamma_override;

  //! Throws std::invalid_argument unless 0 < beta < alpha < 1 and any
  //! override is positive and finite.
  void validate() const;
};

//! anchor_quantile * (alpha / beta)^gamma. beta == alpha is allowed and
//! returns the anchor unchanged.
double weissman_extrapolate(double anchor_quantile, double alpha, double beta, double gamma);

struct WeissmanEstimate
{
  double anchor_quantile = 0.0; // q^(alpha | x)
  double gamma = 0.0;           // gamma^(x) at the same anchor
  double quantile = 0.0;        // q^W(beta | x)
};

WeissmanEstimate weissman_quantile(const ConditionalSurvival& survival,
                                   const WeissmanQuery& query,
                                   const TailIndexSpec& spec);

WeissmanEstimate weissman_quantile(const Dataset& data,
                                   std::span<const double> x,
                                   const WeissmanQuery& query,
                                   const EstimatorConfig& cfg,
                                   const TailIndexSpec& spec);

//! Plug-in asymptotic standard deviation of log q^W(beta|x) - log q(beta|x):
//! sqrt(V_phi) * sigma_n * log(alpha / beta). Only meaningful asymptotically.
double weissman_log_sd(const TailIndexSpec& spec, double gamma, double sigma_n, double alpha, double beta);

//! c log(n) / n.
double default_anchor_order(std::size_t n, double c = 20.0);

} // namespace fextq

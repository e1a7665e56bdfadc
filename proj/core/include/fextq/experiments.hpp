#pragma once

#include "fextq/estimator.hpp"
#include "fextq/models.hpp"
#include "fextq/semimetrics.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fextq {

//! Replicated Burr study: for each replication simulate n cosine curves with
//! Burr responses, pick h by cross-validation separately for every
//! semi-metric, then compute the in-sample extrapolated quantile at every
//! X_i and the squared error
//!   Delta = sum_i (q^W(beta | X_i) - q(beta | X_i))^2
//! for each (s, J, c) cell, with the Hill estimator on tau_j = (1/j)^s and
//! anchor alpha = c log(n) / n.
struct ExperimentPlan
{
  std::size_t N = 50;
  std::size_t n = 500;
  std::optional<double> beta; // default 5 / n
  std::vector<double> c_grid{ 5, 10, 15, 20 };
  std::vector<double> s_grid{ 1, 2, 3, 10 };
  std::vector<std::size_t> J_grid{ 5 };
  std::vector<SemiMetricKind> semimetrics{ SemiMetricKind::l2, SemiMetricKind::norm_diff };
  std::uint64_t seed = 1;
  double lambda = 0.1;
  double h_lo = 0.01;
  double h_hi = 0.1;
  std::size_t h_count = 20;
  std::size_t curve_points = 100;
  std::size_t threads = 1;

  double resolved_beta() const;
  //! Throws std::invalid_argument on empty grids, N = 0, n < 2, or orders
  //! outside 0 < beta < alpha < 1 for some c.
  void validate() const;
};

struct ExperimentCell
{
  double s = 0.0;
  std::size_t J = 0;
  SemiMetricKind semimetric = SemiMetricKind::l2;
  double c = 0.0;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
  std::size_t failures = 0;  // replications where some estimate failed
  std::vector<double> deltas; // successful replications, in replication order
};

struct ExperimentResult
{
  std::vector<ExperimentCell> cells; // ordered by s, J, semimetric, c
  //! Selected h per semi-metric (outer) and replication (inner); NaN if CV failed.
  std::vector<std::vector<double>> h_selected;
};

ExperimentResult burr_experiment(const ExperimentPlan& plan);

//! Which limit law a normality check exercises.
enum class NormalityTarget
{
  csf,      // Lambda_n^-1 (F^(a_j y_n)/F(a_j y_n) - 1), covariance a_{j^j'}^{1/gamma}
  quantile, // sigma_n^-1 (q^(tau_j alpha)/q(tau_j alpha) - 1), covariance gamma^2 / tau_{j^j'}
  gamma,    // sigma_n^-1 (gamma^ - gamma), variance V_phi (Hill)
  weissman, // sigma_n^-1 / log(alpha/beta) (q^W(beta)/q(beta) - 1), variance V_phi (Hill)
};

//! Monte Carlo setting in which every covariate equals the same curve x, so
//! the limit laws can be checked without covariate-smoothing bias.
struct NormalityPlan
{
  std::size_t N = 500;
  std::size_t n = 2000;
  double alpha = 0.1;
  double beta = 0.01;
  std::vector<double> taus{ 1.0, 0.5 };
  //! Multipliers a_j of y_n = q(alpha) for the csf target.
  std::vector<double> a{ 1.0, 2.0 };
  double h = 1.0;
  double lambda = 0.1;
  CovariateKernel kernel = CovariateKernel::uniform();
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

struct NormalityReport
{
  NormalityTarget target = NormalityTarget::quantile;
  std::vector<double> theoretical_sd;       // per component
  std::vector<double> sd_ratio;             // empirical sd / theoretical sd
  std::vector<std::vector<double>> covariance;   // empirical
  std::vector<std::vector<double>> correlation;  // empirical
  std::vector<std::vector<double>> theoretical_correlation;
  std::vector<double> ks; // KS distance of each component, standardised by theory, to N(0,1)
  std::vector<std::vector<double>> samples; // component-major
};

NormalityReport normality_check(const HeavyTailModel& model,
                                std::span<const double> x,
                                NormalityTarget target,
                                const NormalityPlan& plan);

struct PresencePoint
{
  std::size_t n = 0;
  double h = 0.0;
  double y = 0.0;
};

struct PresenceResult
{
  PresencePoint point;
  double presence = 0.0;    // Monte Carlo estimate
  double binomial_sd = 0.0; // sqrt(p(1-p)/reps) at the estimate
  double phi = 0.0;         // Monte Carlo small-ball probability
  double survival = 0.0;    // F(y | x), model truth
  double approximation = 0.0; // 1 - exp(-n phi F)
};

struct PresencePlan
{
  std::size_t reps = 2000;
  std::size_t phi_draws = 1'000'000;
  SemiMetricKind semimetric = SemiMetricKind::norm_diff;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

//! P(some i has d(x, X_i) <= h and Y_i > y) for X_i from the process and
//! Y_i | X_i from the model. The model should not depend on x for the
//! exponential approximation to be exact up to the Poisson limit.
std::vector<PresenceResult> presence_curve(const CosineCovariateProcess& process,
                                                  const HeavyTailModel& model,
                                                  std::span<const double> x,
                                                  std::span<const PresencePoint> points,
                                                  const PresencePlan& plan);

struct ExpansionRow
{
  double alpha = 0.0;
  double beta = 0.0;
  double lhs = 0.0;    // |log q(beta) - log q(alpha) + gamma log(beta / alpha)|
  double driver = 0.0; // log(alpha / beta) |epsilon(q(alpha))|
  double ratio = 0.0;  // lhs / driver; 0 when both vanish, inf when only driver does
};

std::vector<ExpansionRow> quantile_expansion_check(const TailLaw& law,
                                                 std::span<const double> alphas,
                                                 std::span<const double> betas);

} // namespace fextq

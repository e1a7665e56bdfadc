#pragma once

#include "fextq/functional_data.hpp"
#include "fextq/kernels.hpp"
#include "fextq/semimetrics.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace fextq {

struct EstimatorConfig
{
  double h = 0.1;      // covariate bandwidth, in semi-metric units
  double lambda = 0.1; // response bandwidth, in units of Y
  CovariateKernel kernel = default_covariate_kernel();
  ResponseKernel response_kernel = triangular_response_kernel();
  SemiMetricKind semimetric = SemiMetricKind::l2;

  //! Throws std::invalid_argument unless h > 0 and lambda > 0.
  void validate() const;
};

//! No observation falls inside the covariate ball B(x, h).
class EmptyNeighborhood : public std::runtime_error
{
public:
  EmptyNeighborhood(double h, double nearest_distance);

  double bandwidth() const { return h_; }
  //! Smallest observed distance to x; any h at or above it is non-empty.
  double nearest_distance() const { return nearest_; }

private:
  double h_;
  double nearest_;
};

struct LocalWeights
{
  std::vector<double> weights; // K(d(x, X_i) / h)
  double total = 0.0;
};

//! Throws EmptyNeighborhood when every weight vanishes.
LocalWeights local_weights(std::span<const double> distances, double h, const CovariateKernel& kernel);
LocalWeights local_weights(const Dataset& data, std::span<const double> x, const EstimatorConfig& cfg);

//! Kernel estimate of the conditional survival function y -> P(Y > y | X = x)
//! built from the observations carrying a positive weight, together with its
//! generalized inverse.
class ConditionalSurvival
{
public:
  //! Observations with zero weight are dropped. Throws EmptyNeighborhood
  //! (with nearest distance 0) if no weight is positive.
  ConditionalSurvival(std::span<const double> responses,
                      std::span<const double> weights,
                      double lambda,
                      ResponseKernel kernel = triangular_response_kernel());

  //! Weighted average of Q((Y_i - y) / lambda). Non-increasing and
  //! continuous in y; 1 below min Y - lambda, 0 above max Y + lambda.
  double operator()(double y) const;

  //! inf{t : survival(t) <= alpha}, found by bisection on
  //! [min Y - lambda, max Y + lambda] down to an absolute tolerance of
  //! rel_tol * (1 + bracket width). Throws std::invalid_argument unless
  //! 0 < alpha < 1.
  double quantile(double alpha, double rel_tol = 1e-10) const;

  double lambda() const { return lambda_; }
  double total_weight() const { return total_; }
  std::size_t support_size() const { return y_.size(); }
  double min_response() const { return y_.front(); }
  double max_response() const { return y_.back(); }

private:
  std::vector<double> y_;       // ascending
  std::vector<double> w_;       // aligned with y_
  std::vector<double> w_above_; // w_above_[k] = sum of w_[k..]
  double total_ = 0.0;
  double lambda_;
  ResponseKernel kernel_;
};

//! Builds F^_n(. | x) for the curve x against the full dataset.
ConditionalSurvival conditional_survival(const Dataset& data,
                                         std::span<const double> x,
                                         const EstimatorConfig& cfg);

//! Same, reusing precomputed distances from x to every observation.
ConditionalSurvival conditional_survival(std::span<const double> responses,
                                         std::span<const double> distances,
                                         const EstimatorConfig& cfg);

double csf(const Dataset& data, std::span<const double> x, double y, const EstimatorConfig& cfg);
double quantile(const Dataset& data, std::span<const double> x, double alpha, const EstimatorConfig& cfg);

struct QuantileOrder
{
  double alpha;
};

struct SurvivalLevel
{
  double survival; // F(y | x), estimated or known
};

//! Empirical small-ball probability, kernel moments and the normalising
//! rates sigma_n (quantile orders) or Lambda_n (tail probabilities).
struct Standardization
{
  double phi_hat = 0.0; // #{i : d(x, X_i) <= h} / n
  double mu1_hat = 0.0; // sum K(d/h) / n
  double mu2_hat = 0.0; // sum K^2(d/h) / n
  double sigma_n = 0.0; // (n alpha mu1^2 / mu2)^(-1/2); NaN if no order given
  double lambda_n = 0.0; // (n F mu1^2 / mu2)^(-1/2); NaN if no level given

  //! n mu1^2 / mu2, the effective local sample size.
  double effective_size = 0.0;
};

//! Empirical kernel moment (1/n) sum K^tau(d_i / h).
double kernel_moment(std::span<const double> distances, double h, const CovariateKernel& kernel, double tau);

Standardization standardization(std::span<const double> distances,
                                double h,
                                const CovariateKernel& kernel,
                                std::variant<QuantileOrder, SurvivalLevel> level);

Standardization standardization(const Dataset& data,
                                std::span<const double> x,
                                std::variant<QuantileOrder, SurvivalLevel> level,
                                const EstimatorConfig& cfg);

} // namespace fextq

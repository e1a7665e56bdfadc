#pragma once

#include "fextq/estimator.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fextq {

//! Raised when a tail-index estimate cannot be formed (nonpositive quantile,
//! degenerate spacing, non-finite result).
class TailIndexError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! One member of the location/scale invariant family
//!
//!   gamma^ = phi(log q^(tau_1 a), ..., log q^(tau_J a)) / phi(log 1/tau_1, ..., log 1/tau_J)
//!
//! where phi(theta v) = theta phi(v) for theta > 0 and phi(x + eta u) = phi(x)
//! for u = (1, ..., 1). Weights satisfy 1 = tau_1 > tau_2 > ... > tau_J > 0.
//!
//! Every spec carries an analytic gradient, checked against central finite
//! differences when the spec is constructed.
class TailIndexSpec
{
public:
  using Phi = std::function<double(std::span<const double>)>;
  using Gradient = std::function<void(std::span<const double>, std::span<double>)>;

  //! phi(x) = sum_j (x_j - x_1).
  static TailIndexSpec hill(std::vector<double> taus);
  //! J = 3, tau = (1, 1/2, 1/4), phi(x) = log((e^x2 - e^x1) / (e^x3 - e^x2)).
  static TailIndexSpec pickands();
  //! phi(x) = m_p(x)^(1/p), m_p(x) = sum_j (x_j - x_1)^p.
  static TailIndexSpec phi_p(std::vector<double> taus, double p);
  //! phi(x) = m_q(x)^(p/q) m_r(x)^((1-p)/r).
  static TailIndexSpec phi_pqr(std::vector<double> taus, double p, double q, double r);

  //! A user-supplied member. Throws std::invalid_argument if the taus are
  //! invalid, phi(v) vanishes or the gradient disagrees with finite
  //! differences at v.
  static TailIndexSpec custom(std::string name, std::vector<double> taus, Phi phi, Gradient gradient);

  const std::string& name() const { return name_; }
  std::span<const double> taus() const { return taus_; }
  std::size_t size() const { return taus_.size(); }

  //! v = (log(1/tau_1), ..., log(1/tau_J)).
  std::span<const double> v() const { return v_; }
  double phi_at_v() const { return phi_v_; }

  double phi(std::span<const double> x) const { return phi_(x); }
  std::vector<double> gradient(std::span<const double> x) const;

private:
  TailIndexSpec(std::string name, std::vector<double> taus, Phi phi, Gradient gradient);

  std::string name_;
  std::vector<double> taus_;
  std::vector<double> v_;
  Phi phi_;
  Gradient gradient_;
  double phi_v_ = 0.0;
};

//! tau_j = (1/j)^s, j = 1..J.
std::vector<double> power_taus(double s, std::size_t J);

//! Throws std::invalid_argument unless 1 = tau_1 > tau_2 > ... > tau_J > 0.
void validate_taus(std::span<const double> taus);

//! Central-difference gradient of spec.phi at x.
std::vector<double> finite_difference_gradient(const TailIndexSpec& spec, std::span<const double> x);

//! Tail index from quantile values q_j = q(tau_j alpha), bypassing the kernel
//! stage. Throws TailIndexError on nonpositive quantiles or a non-finite result.
double gamma_from_quantiles(const TailIndexSpec& spec, std::span<const double> quantiles);

//! Tail index at the anchor order alpha from an estimated conditional survival.
double estimate_gamma(const ConditionalSurvival& survival, double alpha, const TailIndexSpec& spec);

double estimate_gamma(const Dataset& data,
                      std::span<const double> x,
                      double alpha,
                      const TailIndexSpec& spec,
                      const EstimatorConfig& cfg);

//! Which quantile order the normalising rate sigma_n refers to.
enum class VarianceScale
{
  anchor,         // sigma_n built from the anchor order alpha (tau_1 alpha)
  smallest_order, // sigma_n built from the smallest order tau_J alpha
};

//! Limiting variance of sigma_n^{-1}(gamma^ - gamma):
//!   gamma^2 / phi(v)^2 * g' Sigma g,  g = grad phi(gamma v),
//!   Sigma_{j,j'} = 1 / tau_{min(j, j')}.
//! With VarianceScale::smallest_order the value is multiplied by tau_J,
//! which re-expresses it against sigma_n at the order tau_J alpha.
double asymptotic_variance(const TailIndexSpec& spec,
                           double gamma,
                           VarianceScale scale = VarianceScale::anchor);

//! gamma^2 (sum_j (2(J - j) + 1) / tau_j - J^2) / (sum_j log(1/tau_j))^2.
double hill_variance_closed_form(std::span<const double> taus, double gamma);

//! gamma^2 (2^(2 gamma + 1) + 1) / (4 log(2)^2 (2^gamma - 1)^2), the classical
//! Pickands variance. It is normalised at the smallest of the three orders.
double pickands_variance_closed_form(double gamma);

} // namespace fextq

#include "fextq/tail_index.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace fextq {

namespace {

// m_p(x) = sum_{j>=2} (x_j - x_1)^p and its gradient.
double power_sum(std::span<const double> x, double p)
{
  double acc = 0.0;
  for (std::size_t j = 1; j < x.size(); ++j)
    acc += std::pow(x[j] - x[0], p);
  return acc;
}

void power_sum_gradient(std::span<const double> x, double p, std::span<double> out)
{
  double first = 0.0;
  for (std::size_t j = 1; j < x.size(); ++j) {
    out[j] = p * std::pow(x[j] - x[0], p - 1.0);
    first -= out[j];
  }
  out[0] = first;
}

void check_exponent(double value, const char* name)
{
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument(std::string("exponent ") + name + " must be positive and finite");
}

std::string format_param(double value)
{
  std::string s = format_double(value);
  return s;
}

} // namespace

void validate_taus(std::span<const double> taus)
{
  if (taus.empty())
    throw std::invalid_argument("tau weights are empty");
  if (taus[0] != 1.0)
    throw std::invalid_argument("tau_1 must equal 1");
  for (std::size_t j = 1; j < taus.size(); ++j) {
    if (!(taus[j] < taus[j - 1]) || !(taus[j] > 0.0))
      throw std::invalid_argument("tau weights must be strictly decreasing and positive");
  }
}

std::vector<double> power_taus(double s, std::size_t J)
{
  if (!(s > 0.0) || !std::isfinite(s))
    throw std::invalid_argument("tau exponent s must be positive");
  if (J < 1)
    throw std::invalid_argument("J must be at least 1");
  std::vector<double> taus(J);
  for (std::size_t j = 0; j < J; ++j)
    taus[j] = std::pow(1.0 / static_cast<double>(j + 1), s);
  return taus;
}

TailIndexSpec::TailIndexSpec(std::string name, std::vector<double> taus, Phi phi, Gradient gradient)
  : name_(std::move(name))
  , taus_(std::move(taus))
  , phi_(std::move(phi))
  , gradient_(std::move(gradient))
{
  validate_taus(taus_);
  v_.resize(taus_.size());
  for (std::size_t j = 0; j < taus_.size(); ++j)
    v_[j] = std::log(1.0 / taus_[j]);
  phi_v_ = phi_(v_);
  if (!std::isfinite(phi_v_) || phi_v_ == 0.0)
    throw std::invalid_argument("spec '" + name_ + "': phi(v) must be finite and nonzero");

  const auto analytic = this->gradient(v_);
  const auto numeric = finite_difference_gradient(*this, v_);
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t j = 0; j < analytic.size(); ++j) {
    diff += (analytic[j] - numeric[j]) * (analytic[j] - numeric[j]);
    scale += analytic[j] * analytic[j];
  }
  if (!(std::sqrt(diff) <= 1e-6 * std::max(std::sqrt(scale), 1e-300)))
    throw std::invalid_argument("spec '" + name_ + "': analytic gradient disagrees with finite differences");
}

std::vector<double> TailIndexSpec::gradient(std::span<const double> x) const
{
  std::vector<double> g(x.size(), 0.0);
  gradient_(x, g);
  return g;
}

TailIndexSpec TailIndexSpec::custom(std::string name, std::vector<double> taus, Phi phi, Gradient gradient)
{
  return TailIndexSpec(std::move(name), std::move(taus), std::move(phi), std::move(gradient));
}

TailIndexSpec TailIndexSpec::hill(std::vector<double> taus)
{
  if (taus.size() < 2)
    throw std::invalid_argument("hill needs J >= 2 weights");
  auto phi = [](std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t j = 1; j < x.size(); ++j)
      acc += x[j] - x[0];
    return acc;
  };
  auto grad = [](std::span<const double> x, std::span<double> g) {
    g[0] = -static_cast<double>(x.size() - 1);
    for (std::size_t j = 1; j < x.size(); ++j)
      g[j] = 1.0;
  };
  return TailIndexSpec("hill", std::move(taus), phi, grad);
}

TailIndexSpec TailIndexSpec::pickands()
{
  // Written in terms of the spacings so that large log-quantiles cannot
  // overflow the exponentials.
  auto phi = [](std::span<const double> x) {
    const double d2 = x[1] - x[0];
    const double d3 = x[2] - x[1];
    return std::log(std::expm1(d2) / std::expm1(d3)) - d2;
  };
  auto grad = [](std::span<const double> x, std::span<double> g) {
    const double d2 = x[1] - x[0];
    const double d3 = x[2] - x[1];
    g[0] = -1.0 / std::expm1(d2);
    g[1] = -1.0 / std::expm1(-d2) + 1.0 / std::expm1(d3);
    g[2] = 1.0 / std::expm1(-d3);
  };
  return TailIndexSpec("pickands", { 1.0, 0.5, 0.25 }, phi, grad);
}

TailIndexSpec TailIndexSpec::phi_p(std::vector<double> taus, double p)
{
  check_exponent(p, "p");
  if (taus.size() < 2)
    throw std::invalid_argument("phi-p needs J >= 2 weights");
  auto phi = [p](std::span<const double> x) { return std::pow(power_sum(x, p), 1.0 / p); };
  auto grad = [p](std::span<const double> x, std::span<double> g) {
    power_sum_gradient(x, p, g);
    const double factor = std::pow(power_sum(x, p), 1.0 / p - 1.0) / p;
    for (double& gj : g)
      gj *= factor;
  };
  return TailIndexSpec("phi-p(p=" + format_param(p) + ")", std::move(taus), phi, grad);
}

TailIndexSpec TailIndexSpec::phi_pqr(std::vector<double> taus, double p, double q, double r)
{
  check_exponent(p, "p");
  check_exponent(q, "q");
  check_exponent(r, "r");
  if (taus.size() < 2)
    throw std::invalid_argument("phi-pqr needs J >= 2 weights");
  auto phi = [p, q, r](std::span<const double> x) {
    return std::pow(power_sum(x, q), p / q) * std::pow(power_sum(x, r), (1.0 - p) / r);
  };
  auto grad = [p, q, r](std::span<const double> x, std::span<double> g) {
    const double mq = power_sum(x, q);
    const double mr = power_sum(x, r);
    const double value = std::pow(mq, p / q) * std::pow(mr, (1.0 - p) / r);
    std::vector<double> gq(x.size());
    std::vector<double> gr(x.size());
    power_sum_gradient(x, q, gq);
    power_sum_gradient(x, r, gr);
    for (std::size_t j = 0; j < x.size(); ++j)
      g[j] = value * ((p / q) * gq[j] / mq + ((1.0 - p) / r) * gr[j] / mr);
  };
  return TailIndexSpec("phi-pqr(p=" + format_param(p) + ",q=" + format_param(q) +
                         ",r=" + format_param(r) + ")",
                       std::move(taus), phi, grad);
}

std::vector<double> finite_difference_gradient(const TailIndexSpec& spec, std::span<const double> x)
{
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double step = 1e-5 * (1.0 + std::abs(x[j]));
    const double saved = point[j];
    point[j] = saved + step;
    const double up = spec.phi(point);
    point[j] = saved - step;
    const double down = spec.phi(point);
    point[j] = saved;
    g[j] = (up - down) / (2.0 * step);
  }
  return g;
}

double gamma_from_quantiles(const TailIndexSpec& spec, std::span<const double> quantiles)
{
  if (quantiles.size() != spec.size())
    throw std::invalid_argument("expected " + std::to_string(spec.size()) + " quantiles, got " +
                                std::to_string(quantiles.size()));
  std::vector<double> logs(quantiles.size());
  for (std::size_t j = 0; j < quantiles.size(); ++j) {
    if (!(quantiles[j] > 0.0) || !std::isfinite(quantiles[j]))
      throw TailIndexError("quantile estimate " + format_double(quantiles[j]) + " at tau_" +
                           std::to_string(j + 1) + " is not positive; log undefined");
    logs[j] = std::log(quantiles[j]);
  }
  const double gamma = spec.phi(logs) / spec.phi_at_v();
  if (!std::isfinite(gamma))
    throw TailIndexError("tail-index estimate '" + spec.name() + "' is not finite");
  return gamma;
}

double estimate_gamma(const ConditionalSurvival& survival, double alpha, const TailIndexSpec& spec)
{
  const auto taus = spec.taus();
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("anchor order must lie in (0, 1), got " + format_double(alpha));
  std::vector<double> q(taus.size());
  for (std::size_t j = 0; j < taus.size(); ++j)
    q[j] = survival.quantile(taus[j] * alpha);
  return gamma_from_quantiles(spec, q);
}

double estimate_gamma(const Dataset& data,
                      std::span<const double> x,
                      double alpha,
                      const TailIndexSpec& spec,
                      const EstimatorConfig& cfg)
{
  return estimate_gamma(conditional_survival(data, x, cfg), alpha, spec);
}

double asymptotic_variance(const TailIndexSpec& spec, double gamma, VarianceScale scale)
{
  if (!(gamma > 0.0))
    throw std::invalid_argument("gamma must be positive");
  const auto taus = spec.taus();
  const auto v = spec.v();
  std::vector<double> point(v.size());
  for (std::size_t j = 0; j < v.size(); ++j)
    point[j] = gamma * v[j];
  const auto g = spec.gradient(point);

  double quad = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t k = 0; k < g.size(); ++k)
      quad += g[j] * g[k] / taus[std::min(j, k)];
  double var = gamma * gamma / (spec.phi_at_v() * spec.phi_at_v()) * quad;
  if (scale == VarianceScale::smallest_order)
    var *= taus.back();
  return var;
}

double hill_variance_closed_form(std::span<const double> taus, double gamma)
{
  validate_taus(taus);
  const auto J = static_cast<double>(taus.size());
  double num = -J * J;
  double den = 0.0;
  for (std::size_t j = 0; j < taus.size(); ++j) {
    const double j1 = static_cast<double>(j + 1);
    num += (2.0 * (J - j1) + 1.0) / taus[j];
    den += std::log(1.0 / taus[j]);
  }
  return gamma * gamma * num / (den * den);
}

double pickands_variance_closed_form(double gamma)
{
  const double ln2 = std::numbers::ln2;
  const double a = std::pow(2.0, gamma);
  return gamma * gamma * (std::pow(2.0, 2.0 * gamma + 1.0) + 1.0) /
         (4.0 * ln2 * ln2 * (a - 1.0) * (a - 1.0));
}

} // namespace fextq

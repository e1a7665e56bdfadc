#include "fextq/models.hpp"

#include "fextq/semimetrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fextq {

std::string_view to_string(TailFamily family)
{
  switch (family) {
    case TailFamily::pareto:
      return "pareto";
    case TailFamily::frechet:
      return "frechet";
    case TailFamily::burr:
      return "burr";
  }
  return "unknown";
}

namespace {

void check_order(double alpha)
{
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("order must lie in (0, 1), got " + format_double(alpha));
}

void check_parameter(double value, const char* name)
{
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::domain_error(std::string("model parameter ") + name + " = " + format_double(value) +
                            " is not strictly positive");
}

} // namespace

double TailLaw::survival(double y) const
{
  if (!(y > 0.0))
    return 1.0;
  switch (family) {
    case TailFamily::pareto:
      return y >= 1.0 ? std::pow(y, -theta) : 1.0;
    case TailFamily::frechet:
      return -std::expm1(-std::pow(y, -theta));
    case TailFamily::burr:
      return std::exp(-lambda * std::log1p(std::pow(y, tau)));
  }
  return 0.0;
}

double TailLaw::log_quantile(double alpha) const
{
  check_order(alpha);
  switch (family) {
    case TailFamily::pareto:
      return -std::log(alpha) / theta;
    case TailFamily::frechet:
      return -std::log(-std::log1p(-alpha)) / theta;
    case TailFamily::burr:
      return std::log(std::expm1(-std::log(alpha) / lambda)) / tau;
  }
  return 0.0;
}

double TailLaw::quantile(double alpha) const
{
  return std::exp(log_quantile(alpha));
}

double TailLaw::gamma() const
{
  return family == TailFamily::burr ? 1.0 / (lambda * tau) : 1.0 / theta;
}

double TailLaw::c() const
{
  switch (family) {
    case TailFamily::pareto:
      return 1.0;
    case TailFamily::frechet:
      return -std::expm1(-1.0);
    case TailFamily::burr:
      return std::pow(2.0, -lambda);
  }
  return 0.0;
}

double TailLaw::epsilon(double y) const
{
  switch (family) {
    case TailFamily::pareto:
      return 0.0;
    case TailFamily::frechet:
      return 0.5 * theta * std::pow(y, -theta);
    case TailFamily::burr:
      return lambda * tau * std::pow(y, -tau);
  }
  return 0.0;
}

HeavyTailModel::HeavyTailModel(TailFamily family, ParameterMap a, ParameterMap b)
  : family_(family)
  , a_(std::move(a))
  , b_(std::move(b))
{}

HeavyTailModel HeavyTailModel::pareto(ParameterMap theta)
{
  return HeavyTailModel(TailFamily::pareto, std::move(theta), nullptr);
}

HeavyTailModel HeavyTailModel::frechet(ParameterMap theta)
{
  return HeavyTailModel(TailFamily::frechet, std::move(theta), nullptr);
}

HeavyTailModel HeavyTailModel::burr(ParameterMap tau, ParameterMap lambda)
{
  return HeavyTailModel(TailFamily::burr, std::move(tau), std::move(lambda));
}

HeavyTailModel HeavyTailModel::pareto(double theta)
{
  check_parameter(theta, "theta");
  return pareto([theta](std::span<const double>) { return theta; });
}

HeavyTailModel HeavyTailModel::frechet(double theta)
{
  check_parameter(theta, "theta");
  return frechet([theta](std::span<const double>) { return theta; });
}

HeavyTailModel HeavyTailModel::burr(double tau, double lambda)
{
  check_parameter(tau, "tau");
  check_parameter(lambda, "lambda");
  return burr([tau](std::span<const double>) { return tau; },
              [lambda](std::span<const double>) { return lambda; });
}

TailLaw HeavyTailModel::at(std::span<const double> x) const
{
  TailLaw law;
  law.family = family_;
  if (family_ == TailFamily::burr) {
    law.tau = a_(x);
    law.lambda = b_(x);
    check_parameter(law.tau, "tau");
    check_parameter(law.lambda, "lambda");
  } else {
    law.theta = a_(x);
    check_parameter(law.theta, "theta");
  }
  return law;
}

double sample_conditional(const HeavyTailModel& model, std::span<const double> x, double u)
{
  return model.at(x).sample(u);
}

std::mt19937_64 make_stream(std::uint64_t root_seed, std::uint64_t stream)
{
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  const std::uint64_t a = mix(root_seed);
  const std::uint64_t b = mix(a ^ mix(stream + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{ static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                     static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32) };
  return std::mt19937_64(seq);
}

double open_uniform(std::mt19937_64& rng)
{
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

CosineCovariateProcess::CosineCovariateProcess(std::size_t m, double z_lo, double z_hi)
  : grid_(Grid::uniform(0.0, 1.0, m))
  , z_lo_(z_lo)
  , z_hi_(z_hi)
{
  if (!(z_lo > 0.0 && z_lo < z_hi) || !std::isfinite(z_hi))
    throw std::invalid_argument("cosine process needs 0 < z_lo < z_hi");
}

std::vector<double> CosineCovariateProcess::curve(double z) const
{
  const auto t = grid_.points();
  std::vector<double> x(t.size());
  for (std::size_t l = 0; l < t.size(); ++l)
    x[l] = std::cos(2.0 * std::numbers::pi * z * t[l]);
  return x;
}

double CosineCovariateProcess::draw_z(std::mt19937_64& rng) const
{
  return z_lo_ + (z_hi_ - z_lo_) * open_uniform(rng);
}

double CosineCovariateProcess::squared_norm_closed_form(double z)
{
  const double a = 4.0 * std::numbers::pi * z;
  return 0.5 * (1.0 + std::sin(a) / a);
}

HeavyTailModel burr_cosine_model(const CosineCovariateProcess& process)
{
  const Grid grid = process.grid();
  constexpr int checks = 2000;
  for (int k = 0; k <= checks; ++k) {
    const double z = process.z_lo() + (process.z_hi() - process.z_lo()) * k / checks;
    const double norm2 = squared_norm(process.curve(z), grid);
    if (!(norm2 > 0.375))
      throw std::domain_error("burr lambda(X) undefined: ||X||^2 = " + format_double(norm2) +
                              " at Z = " + format_double(z));
  }
  return HeavyTailModel::burr([](std::span<const double>) { return 2.0; },
                              [grid](std::span<const double> x) {
                                return 2.0 / (8.0 * squared_norm(x, grid) - 3.0);
                              });
}

SimulatedSample simulate(const CosineCovariateProcess& process,
                         const HeavyTailModel& model,
                         std::size_t n,
                         std::mt19937_64& rng)
{
  const std::size_t m = process.grid().size();
  std::vector<double> values(n * m);
  std::vector<double> y(n);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = process.draw_z(rng);
    const auto x = process.curve(z[i]);
    std::copy(x.begin(), x.end(), values.begin() + static_cast<std::ptrdiff_t>(i * m));
    y[i] = model.at(x).sample(open_uniform(rng));
  }
  return SimulatedSample{ Dataset(process.grid(), std::move(values), std::move(y)), std::move(z) };
}

} // namespace fextq

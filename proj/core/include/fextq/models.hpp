#pragma once

#include "fextq/functional_data.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace fextq {

enum class TailFamily
{
  pareto,  // y^-theta
  frechet, // 1 - exp(-y^-theta)
  burr,    // (1 + y^tau)^-lambda
};

std::string_view to_string(TailFamily family);

//! Heavy-tailed law of Y at one fixed covariate value.
struct TailLaw
{
  TailFamily family = TailFamily::pareto;
  double theta = 1.0;  // Pareto and Frechet
  double tau = 1.0;    // Burr
  double lambda = 1.0; // Burr

  //! P(Y > y).
  double survival(double y) const;
  //! The y with P(Y > y) = alpha, alpha in (0, 1).
  double quantile(double alpha) const;
  double log_quantile(double alpha) const;

  double gamma() const;
  //! Constant c in the tail representation.
  double c() const;
  //! Leading-order second-order auxiliary function epsilon(y).
  double epsilon(double y) const;

  //! Inversion sampling: quantile(u) for u in (0, 1).
  double sample(double u) const { return quantile(u); }
};

//! A family whose parameters depend on the covariate curve.
class HeavyTailModel
{
public:
  using ParameterMap = std::function<double(std::span<const double>)>;

  static HeavyTailModel pareto(ParameterMap theta);
  static HeavyTailModel frechet(ParameterMap theta);
  static HeavyTailModel burr(ParameterMap tau, ParameterMap lambda);

  static HeavyTailModel pareto(double theta);
  static HeavyTailModel frechet(double theta);
  static HeavyTailModel burr(double tau, double lambda);

  TailFamily family() const { return family_; }

  //! Parameters evaluated at x. Throws std::domain_error if any is not
  //! strictly positive and finite.
  TailLaw at(std::span<const double> x) const;

private:
  HeavyTailModel(TailFamily family, ParameterMap a, ParameterMap b);

  TailFamily family_;
  ParameterMap a_; // theta or tau
  ParameterMap b_; // lambda (Burr only)
};

double sample_conditional(const HeavyTailModel& model, std::span<const double> x, double u);

//! Independent random streams: stream k of root seed s is an mt19937_64
//! seeded from a splitmix64 mix of (s, k), so results never depend on
//! which worker consumes which stream.
std::mt19937_64 make_stream(std::uint64_t root_seed, std::uint64_t stream);

//! Uniform draw in the open interval (0, 1) from 53 random bits.
double open_uniform(std::mt19937_64& rng);

//! X(t) = cos(2 pi Z t), Z uniform on [1/4, 1], on m equally spaced points of [0, 1].
class CosineCovariateProcess
{
public:
  explicit CosineCovariateProcess(std::size_t m = 100, double z_lo = 0.25, double z_hi = 1.0);

  const Grid& grid() const { return grid_; }
  double z_lo() const { return z_lo_; }
  double z_hi() const { return z_hi_; }

  std::vector<double> curve(double z) const;
  double draw_z(std::mt19937_64& rng) const;

  //! ||X||_2^2 = (1 + sin(4 pi Z) / (4 pi Z)) / 2.
  static double squared_norm_closed_form(double z);

private:
  Grid grid_;
  double z_lo_;
  double z_hi_;
};

//! Burr with tau(X) = 2 and lambda(X) = 2 / (8 ||X||^2 - 3), the squared norm
//! taken by trapezoidal quadrature on the process grid. Throws
//! std::domain_error if some Z in the process range gives ||X||^2 <= 3/8.
HeavyTailModel burr_cosine_model(const CosineCovariateProcess& process);

struct SimulatedSample
{
  Dataset data;
  std::vector<double> z; // latent Z_i
};

//! n draws of (X, Y) with X from the process and Y | X from the model.
SimulatedSample simulate(const CosineCovariateProcess& process,
                         const HeavyTailModel& model,
                         std::size_t n,
                         std::mt19937_64& rng);

} // namespace fextq

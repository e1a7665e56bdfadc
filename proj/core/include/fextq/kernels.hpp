#pragma once

#include <string_view>

namespace fextq {

//! Type I covariate kernel K: supported on [0, 1], bounded between two
//! positive constants there, integrating to one.
class CovariateKernel
{
public:
  enum class Shape
  {
    linear,  // K(t) = 1.9 - 1.8 t
    uniform, // K(t) = 1
  };

  static CovariateKernel linear() { return CovariateKernel(Shape::linear); }
  static CovariateKernel uniform() { return CovariateKernel(Shape::uniform); }

  double operator()(double t) const
  {
    if (!(t >= 0.0 && t <= 1.0))
      return 0.0;
    return shape_ == Shape::linear ? 1.9 - 1.8 * t : 1.0;
  }

  //! C1: infimum of K on [0, 1].
  double lower_bound() const { return shape_ == Shape::linear ? 0.1 : 1.0; }
  //! C2: supremum of K on [0, 1].
  double upper_bound() const { return shape_ == Shape::linear ? 1.9 : 1.0; }

  Shape shape() const { return shape_; }
  std::string_view name() const;

  bool operator==(const CovariateKernel&) const = default;

private:
  explicit CovariateKernel(Shape s)
    : shape_(s)
  {}
  Shape shape_;
};

//! The default covariate kernel of the estimator.
inline CovariateKernel default_covariate_kernel()
{
  return CovariateKernel::linear();
}

//! Accepts "linear" or "uniform".
CovariateKernel parse_covariate_kernel(std::string_view name);

//! Response smoothing pair: density Q' supported on [-1, 1] and its CDF Q.
class ResponseKernel
{
public:
  static ResponseKernel triangular() { return ResponseKernel(); }

  double density(double u) const
  {
    const double a = u < 0.0 ? -u : u;
    return a < 1.0 ? 1.0 - a : 0.0;
  }

  double cdf(double t) const
  {
    if (t <= -1.0)
      return 0.0;
    if (t >= 1.0)
      return 1.0;
    if (t <= 0.0)
      return 0.5 * (1.0 + t) * (1.0 + t);
    return 1.0 - 0.5 * (1.0 - t) * (1.0 - t);
  }

  std::string_view name() const { return "triangular"; }

  bool operator==(const ResponseKernel&) const = default;

private:
  ResponseKernel() = default;
};

inline ResponseKernel triangular_response_kernel()
{
  return ResponseKernel::triangular();
}

ResponseKernel parse_response_kernel(std::string_view name);

} // namespace fextq

#include "fextq/kernels.hpp"

#include <stdexcept>
#include <string>

namespace fextq {

std::string_view CovariateKernel::name() const
{
  return shape_ == Shape::linear ? "linear" : "uniform";
}

CovariateKernel parse_covariate_kernel(std::string_view name)
{
  if (name == "linear")
    return CovariateKernel::linear();
  if (name == "uniform")
    return CovariateKernel::uniform();
  throw std::invalid_argument("unknown covariate kernel '" + std::string(name) +
                              "' (expected linear or uniform)");
}

ResponseKernel parse_response_kernel(std::string_view name)
{
  if (name == "triangular")
    return ResponseKernel::triangular();
  throw std::invalid_argument("unknown response kernel '" + std::string(name) +
                              "' (expected triangular)");
}

} // namespace fextq

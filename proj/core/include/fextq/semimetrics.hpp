#pragma once

#include "fextq/functional_data.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace fextq {

enum class SemiMetricKind
{
  l2,           // ||a - b||_2, trapezoidal quadrature on the grid
  norm_diff,    // | ||a||_2^2 - ||b||_2^2 |
  second_deriv, // sqrt of summed squared centred second differences (index based)
};

SemiMetricKind parse_semimetric(std::string_view name);
std::string_view to_string(SemiMetricKind kind);

//! Trapezoidal integral of `values` over `grid`.
double trapezoid(std::span<const double> values, const Grid& grid);

//! Trapezoidal integral of the squared values, i.e. ||a||_2^2.
double squared_norm(std::span<const double> a, const Grid& grid);

//! Throws std::invalid_argument if the curves do not match the grid, or if a
//! second-derivative distance is requested on fewer than 3 points.
double distance(SemiMetricKind kind,
                std::span<const double> a,
                std::span<const double> b,
                const Grid& grid);

//! Distances from `x` to every curve of `data`.
std::vector<double> distances_to(const Dataset& data,
                                 std::span<const double> x,
                                 SemiMetricKind kind);

//! Symmetric n x n matrix of pairwise semi-metric distances, computed once
//! and read-only afterwards.
class DistanceMatrix
{
public:
  DistanceMatrix(const Dataset& data, SemiMetricKind kind);

  std::size_t size() const { return n_; }
  SemiMetricKind kind() const { return kind_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const
  {
    return std::span<const double>(values_).subspan(i * n_, n_);
  }

  //! Empirical quantile (linear interpolation) of the off-diagonal distances.
  double pair_quantile(double p) const;

  //! Indices (i, j), i < j, of the most distant pair; first one on ties.
  std::pair<std::size_t, std::size_t> argmax_pair() const;

private:
  std::size_t n_;
  SemiMetricKind kind_;
  std::vector<double> values_;
};

} // namespace fextq

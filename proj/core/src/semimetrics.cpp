#include "fextq/semimetrics.hpp"

#include "fextq/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fextq {

namespace {

void check_sizes(std::span<const double> a, std::span<const double> b, const Grid& grid)
{
  if (a.size() != grid.size() || b.size() != grid.size()) {
    throw std::invalid_argument("curve length (" + std::to_string(a.size()) + ", " +
                                std::to_string(b.size()) + ") does not match grid size " +
                                std::to_string(grid.size()));
  }
}

double l2_distance(std::span<const double> a, std::span<const double> b, const Grid& grid)
{
  const auto t = grid.points();
  double acc = 0.0;
  double prev = (a[0] - b[0]) * (a[0] - b[0]);
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double d = a[k] - b[k];
    const double cur = d * d;
    acc += 0.5 * (t[k] - t[k - 1]) * (prev + cur);
    prev = cur;
  }
  return std::sqrt(acc);
}

double second_deriv_distance(std::span<const double> a, std::span<const double> b)
{
  if (a.size() < 3)
    throw std::invalid_argument("second-derivative semi-metric needs at least 3 grid points");
  double acc = 0.0;
  for (std::size_t l = 1; l + 1 < a.size(); ++l) {
    const double dd = (a[l + 1] - b[l + 1]) + (a[l - 1] - b[l - 1]) - 2.0 * (a[l] - b[l]);
    acc += dd * dd;
  }
  return std::sqrt(acc);
}

} // namespace

SemiMetricKind parse_semimetric(std::string_view name)
{
  if (name == "l2")
    return SemiMetricKind::l2;
  if (name == "normdiff")
    return SemiMetricKind::norm_diff;
  if (name == "d2")
    return SemiMetricKind::second_deriv;
  throw std::invalid_argument("unknown semi-metric '" + std::string(name) +
                              "' (expected l2, normdiff or d2)");
}

std::string_view to_string(SemiMetricKind kind)
{
  switch (kind) {
    case SemiMetricKind::l2:
      return "l2";
    case SemiMetricKind::norm_diff:
      return "normdiff";
    case SemiMetricKind::second_deriv:
      return "d2";
  }
  return "?";
}

double trapezoid(std::span<const double> values, const Grid& grid)
{
  const auto t = grid.points();
  double acc = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k)
    acc += 0.5 * (t[k] - t[k - 1]) * (values[k - 1] + values[k]);
  return acc;
}

double squared_norm(std::span<const double> a, const Grid& grid)
{
  const auto t = grid.points();
  double acc = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k)
    acc += 0.5 * (t[k] - t[k - 1]) * (a[k - 1] * a[k - 1] + a[k] * a[k]);
  return acc;
}

double distance(SemiMetricKind kind,
                std::span<const double> a,
                std::span<const double> b,
                const Grid& grid)
{
  check_sizes(a, b, grid);
  switch (kind) {
    case SemiMetricKind::l2:
      return l2_distance(a, b, grid);
    case SemiMetricKind::norm_diff:
      return std::abs(squared_norm(a, grid) - squared_norm(b, grid));
    case SemiMetricKind::second_deriv:
      return second_deriv_distance(a, b);
  }
  throw std::logic_error("unhandled semi-metric");
}

std::vector<double> distances_to(const Dataset& data,
                                 std::span<const double> x,
                                 SemiMetricKind kind)
{
  std::vector<double> out(data.size());
  if (kind == SemiMetricKind::norm_diff) {
    check_sizes(x, data.curve(0), data.grid());
    const double nx = squared_norm(x, data.grid());
    for (std::size_t i = 0; i < data.size(); ++i)
      out[i] = std::abs(nx - squared_norm(data.curve(i), data.grid()));
    return out;
  }
  for (std::size_t i = 0; i < data.size(); ++i)
    out[i] = distance(kind, x, data.curve(i), data.grid());
  return out;
}

DistanceMatrix::DistanceMatrix(const Dataset& data, SemiMetricKind kind)
  : n_(data.size())
  , kind_(kind)
  , values_(n_ * n_, 0.0)
{
  if (kind == SemiMetricKind::second_deriv && data.curve_length() < 3)
    throw std::invalid_argument("second-derivative semi-metric needs at least 3 grid points");

  std::vector<double> norms;
  if (kind == SemiMetricKind::norm_diff) {
    norms.resize(n_);
    for (std::size_t i = 0; i < n_; ++i)
      norms[i] = squared_norm(data.curve(i), data.grid());
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      double d = 0.0;
      if (kind == SemiMetricKind::norm_diff)
        d = std::abs(norms[i] - norms[j]);
      else if (kind == SemiMetricKind::l2)
        d = l2_distance(data.curve(i), data.curve(j), data.grid());
      else
        d = second_deriv_distance(data.curve(i), data.curve(j));
      values_[i * n_ + j] = d;
      values_[j * n_ + i] = d;
    }
  }
}

double DistanceMatrix::pair_quantile(double p) const
{
  if (n_ < 2)
    throw std::invalid_argument("pairwise distances need at least 2 curves");
  std::vector<double> pairs;
  pairs.reserve(n_ * (n_ - 1) / 2);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      pairs.push_back(values_[i * n_ + j]);
  return stats::quantile(pairs, p);
}

std::pair<std::size_t, std::size_t> DistanceMatrix::argmax_pair() const
{
  if (n_ < 2)
    throw std::invalid_argument("argmax pair needs at least 2 curves");
  std::pair<std::size_t, std::size_t> best{ 0, 1 };
  double best_d = values_[1];
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (values_[i * n_ + j] > best_d) {
        best_d = values_[i * n_ + j];
        best = { i, j };
      }
    }
  }
  return best;
}

} // namespace fextq

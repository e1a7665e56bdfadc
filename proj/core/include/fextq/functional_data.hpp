#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fextq {

//! Ordered abscissae on which every curve of a dataset is observed.
class Grid
{
public:
  //! Throws std::invalid_argument unless the points are finite, strictly
  //! increasing and at least two in number.
  explicit Grid(std::vector<double> points);

  //! 0, 1, ..., m-1.
  static Grid unit_spaced(std::size_t m);
  //! m equally spaced points covering [lo, hi].
  static Grid uniform(double lo, double hi, std::size_t m);

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }

  bool operator==(const Grid&) const = default;

private:
  std::vector<double> points_;
};

//! A functional covariate sampled on a grid.
class Curve
{
public:
  //! Throws std::invalid_argument on empty input or non-finite entries.
  explicit Curve(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  operator std::span<const double>() const { return values_; }

private:
  std::vector<double> values_;
};

//! Paired sample (X_i, Y_i), i = 0..n-1, of curves and scalar responses.
//!
//! Contents never change after construction. Copies share the underlying
//! storage, so passing a Dataset by value is cheap and thread-safe.
class Dataset
{
public:
  Dataset(Grid grid, const std::vector<Curve>& curves, std::vector<double> responses);

  //! Row-major n x m matrix of curve values.
  Dataset(Grid grid, std::vector<double> curve_matrix, std::vector<double> responses);

  const Grid& grid() const { return data_->grid; }
  std::size_t size() const { return data_->responses.size(); }
  std::size_t curve_length() const { return data_->grid.size(); }

  std::span<const double> curve(std::size_t i) const;
  std::span<const double> responses() const { return data_->responses; }
  double response(std::size_t i) const { return data_->responses[i]; }

  //! A new dataset sharing nothing mutable with this one.
  Dataset with_responses(std::vector<double> responses) const;

private:
  struct Storage
  {
    Grid grid;
    std::vector<double> values;
    std::vector<double> responses;
  };
  std::shared_ptr<const Storage> data_;
};

//! Malformed dataset input. Row and column are 0-based data indices (the
//! optional grid header is not counted); -1 when not applicable.
class DatasetError : public std::runtime_error
{
public:
  DatasetError(const std::string& what, long row = -1, long column = -1);

  long row() const { return row_; }
  long column() const { return column_; }

private:
  long row_;
  long column_;
};

struct CurveTable
{
  std::vector<double> grid_points; // empty when the file carries no header
  std::vector<double> values;      // row-major
  std::size_t rows = 0;
  std::size_t columns = 0;
};

CurveTable read_curve_table(std::istream& in);
std::vector<double> read_responses(std::istream& in);

Dataset load_dataset(const std::filesystem::path& curves_path,
                     const std::filesystem::path& responses_path);

//! Writes the curves file with a `t=` header row and 17 significant digits,
//! so that load_dataset reproduces every value bit-exactly.
void save_dataset(const Dataset& data,
                  const std::filesystem::path& curves_path,
                  const std::filesystem::path& responses_path);

void write_curves(std::ostream& out, const Dataset& data);
void write_responses(std::ostream& out, const Dataset& data);

//! Decimal text with 17 significant digits (round-trips any double).
std::string format_double(double value);

enum class ResponseTransform
{
  identity,
  reciprocal_percent, // Y = 100 / Y~ for percentages in (0, 100]
};

ResponseTransform parse_response_transform(std::string_view name);

Dataset transform_response(const Dataset& data, ResponseTransform map);

} // namespace fextq

#include "fextq/functional_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fextq {

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line)
{
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, long row, long column)
{
  if (!cell.empty() && cell.front() == '+')
    cell.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    throw DatasetError("non-numeric cell '" + std::string(cell) + "' at row " +
                         std::to_string(row) + ", column " + std::to_string(column),
                       row, column);
  }
  if (!std::isfinite(value)) {
    throw DatasetError("non-finite value at row " + std::to_string(row) + ", column " +
                         std::to_string(column),
                       row, column);
  }
  return value;
}

bool blank(std::string_view line)
{
  return trim(line).empty();
}

void check_finite(std::span<const double> values, const char* what)
{
  for (double v : values) {
    if (!std::isfinite(v))
      throw std::invalid_argument(std::string(what) + " contains a non-finite value");
  }
}

std::vector<double> flatten(const Grid& grid, const std::vector<Curve>& curves)
{
  const std::size_t m = grid.size();
  std::vector<double> values;
  values.reserve(curves.size() * m);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (curves[i].size() != m) {
      throw std::invalid_argument("curve " + std::to_string(i) + " has " +
                                  std::to_string(curves[i].size()) +
                                  " values, grid has " + std::to_string(m));
    }
    auto v = curves[i].values();
    values.insert(values.end(), v.begin(), v.end());
  }
  return values;
}

} // namespace

Grid::Grid(std::vector<double> points)
  : points_(std::move(points))
{
  if (points_.size() < 2)
    throw std::invalid_argument("grid needs at least 2 points");
  check_finite(points_, "grid");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i] > points_[i - 1]))
      throw std::invalid_argument("grid points must be strictly increasing");
  }
}

Grid Grid::unit_spaced(std::size_t m)
{
  std::vector<double> pts(m);
  for (std::size_t i = 0; i < m; ++i)
    pts[i] = static_cast<double>(i);
  return Grid(std::move(pts));
}

Grid Grid::uniform(double lo, double hi, std::size_t m)
{
  if (m < 2)
    throw std::invalid_argument("grid needs at least 2 points");
  std::vector<double> pts(m);
  const double step = (hi - lo) / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i)
    pts[i] = lo + step * static_cast<double>(i);
  pts.back() = hi;
  return Grid(std::move(pts));
}

Curve::Curve(std::vector<double> values)
  : values_(std::move(values))
{
  if (values_.empty())
    throw std::invalid_argument("curve is empty");
  check_finite(values_, "curve");
}

Dataset::Dataset(Grid grid, const std::vector<Curve>& curves, std::vector<double> responses)
  : Dataset(grid, flatten(grid, curves), std::move(responses))
{}

Dataset::Dataset(Grid grid, std::vector<double> curve_matrix, std::vector<double> responses)
{
  const std::size_t m = grid.size();
  if (responses.empty())
    throw std::invalid_argument("dataset needs at least one observation");
  if (curve_matrix.size() != responses.size() * m) {
    throw std::invalid_argument("curve matrix holds " + std::to_string(curve_matrix.size()) +
                                " values, expected n*m = " +
                                std::to_string(responses.size() * m));
  }
  check_finite(curve_matrix, "curve matrix");
  check_finite(responses, "responses");
  data_ = std::make_shared<const Storage>(
    Storage{ std::move(grid), std::move(curve_matrix), std::move(responses) });
}

std::span<const double> Dataset::curve(std::size_t i) const
{
  const std::size_t m = curve_length();
  return std::span<const double>(data_->values).subspan(i * m, m);
}

Dataset Dataset::with_responses(std::vector<double> responses) const
{
  if (responses.size() != size())
    throw std::invalid_argument("response count does not match the number of curves");
  return Dataset(data_->grid, data_->values, std::move(responses));
}

DatasetError::DatasetError(const std::string& what, long row, long column)
  : std::runtime_error(what)
  , row_(row)
  , column_(column)
{}

CurveTable read_curve_table(std::istream& in)
{
  CurveTable table;
  std::string line;
  bool first = true;
  long row = 0;
  while (std::getline(in, line)) {
    if (blank(line))
      continue;
    auto cells = split_cells(line);
    if (first) {
      first = false;
      if (cells.front().starts_with("t=")) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
          auto cell = cells[c];
          if (!cell.starts_with("t="))
            throw DatasetError("header cell " + std::to_string(c) + " lacks the 't=' prefix",
                               -1, static_cast<long>(c));
          cell.remove_prefix(2);
          table.grid_points.push_back(parse_cell(cell, -1, static_cast<long>(c)));
        }
        table.columns = cells.size();
        continue;
      }
    }
    if (table.columns == 0)
      table.columns = cells.size();
    if (cells.size() != table.columns) {
      throw DatasetError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                           " columns, expected " + std::to_string(table.columns),
                         row);
    }
    for (std::size_t c = 0; c < cells.size(); ++c)
      table.values.push_back(parse_cell(cells[c], row, static_cast<long>(c)));
    ++row;
  }
  table.rows = static_cast<std::size_t>(row);
  if (table.rows == 0)
    throw DatasetError("curves file contains no data rows");
  return table;
}

std::vector<double> read_responses(std::istream& in)
{
  std::vector<double> out;
  std::string line;
  long row = 0;
  while (std::getline(in, line)) {
    if (blank(line))
      continue;
    auto cells = split_cells(line);
    if (cells.size() != 1) {
      throw DatasetError("responses row " + std::to_string(row) + " has " +
                           std::to_string(cells.size()) + " columns, expected 1",
                         row);
    }
    out.push_back(parse_cell(cells.front(), row, 0));
    ++row;
  }
  if (out.empty())
    throw DatasetError("responses file contains no data rows");
  return out;
}

Dataset load_dataset(const std::filesystem::path& curves_path,
                     const std::filesystem::path& responses_path)
{
  std::ifstream curves_in(curves_path);
  if (!curves_in)
    throw DatasetError("cannot open curves file " + curves_path.string());
  std::ifstream responses_in(responses_path);
  if (!responses_in)
    throw DatasetError("cannot open responses file " + responses_path.string());

  auto table = read_curve_table(curves_in);
  auto responses = read_responses(responses_in);
  if (responses.size() != table.rows) {
    throw DatasetError("responses file has " + std::to_string(responses.size()) +
                       " rows but curves file has " + std::to_string(table.rows));
  }
  auto make_grid = [&] {
    if (table.grid_points.empty())
      return Grid::unit_spaced(table.columns);
    try {
      return Grid(std::move(table.grid_points));
    } catch (const std::invalid_argument& e) {
      throw DatasetError(std::string("bad grid header: ") + e.what(), 0);
    }
  };
  Grid grid = make_grid();
  return Dataset(std::move(grid), std::move(table.values), std::move(responses));
}

std::string format_double(double value)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_curves(std::ostream& out, const Dataset& data)
{
  const auto pts = data.grid().points();
  for (std::size_t j = 0; j < pts.size(); ++j)
    out << (j ? "," : "") << "t=" << format_double(pts[j]);
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto row = data.curve(i);
    for (std::size_t j = 0; j < row.size(); ++j)
      out << (j ? "," : "") << format_double(row[j]);
    out << '\n';
  }
}

void write_responses(std::ostream& out, const Dataset& data)
{
  for (double y : data.responses())
    out << format_double(y) << '\n';
}

void save_dataset(const Dataset& data,
                  const std::filesystem::path& curves_path,
                  const std::filesystem::path& responses_path)
{
  std::ofstream curves_out(curves_path);
  std::ofstream responses_out(responses_path);
  if (!curves_out || !responses_out)
    throw DatasetError("cannot open output files for writing");
  write_curves(curves_out, data);
  write_responses(responses_out, data);
}

ResponseTransform parse_response_transform(std::string_view name)
{
  if (name == "identity")
    return ResponseTransform::identity;
  if (name == "reciprocal-percent")
    return ResponseTransform::reciprocal_percent;
  throw std::invalid_argument("unknown response transform '" + std::string(name) + "'");
}

Dataset transform_response(const Dataset& data, ResponseTransform map)
{
  std::vector<double> y(data.responses().begin(), data.responses().end());
  if (map == ResponseTransform::reciprocal_percent) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!(y[i] > 0.0 && y[i] <= 100.0)) {
        throw DatasetError("response " + format_double(y[i]) + " at row " + std::to_string(i) +
                             " is outside (0, 100]",
                           static_cast<long>(i), 0);
      }
      y[i] = 100.0 / y[i];
    }
  }
  return data.with_responses(std::move(y));
}

} // namespace fextq

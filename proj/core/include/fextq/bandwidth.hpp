#pragma once

#include "fextq/estimator.hpp"
#include "fextq/semimetrics.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace fextq {

//! Candidate covariate bandwidths h_1 < h_2 < ... < h_M.
class BandwidthGrid
{
public:
  //! Throws std::invalid_argument unless nonempty, positive, finite and
  //! strictly increasing.
  explicit BandwidthGrid(std::vector<double> values);

  //! M equally spaced values from lo to hi (just lo when M = 1).
  static BandwidthGrid regular(double lo, double hi, std::size_t M);

  //! M equally spaced values between the p_lo and p_hi empirical quantiles
  //! of the off-diagonal pairwise distances.
  static BandwidthGrid from_distance_quantiles(const DistanceMatrix& distances,
                                               double p_lo = 0.01,
                                               double p_hi = 0.25,
                                               std::size_t M = 20);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

private:
  std::vector<double> values_;
};

//! Leave-one-out score
//!   sum_i sum_j (1{Y_i >= Y_j} - F^_{-i}(Y_j | X_i))^2
//! where F^_{-i} is the kernel conditional survival at X_i built without
//! observation i. A row whose neighbourhood is empty after removing i
//! predicts 1/2 everywhere. cfg.h is ignored.
double cv_score(const DistanceMatrix& distances,
                std::span<const double> responses,
                double h,
                const EstimatorConfig& cfg);

struct CvResult
{
  double h_opt = 0.0;
  std::vector<double> grid;
  std::vector<double> scores; // aligned with grid
};

//! Minimises cv_score over the grid; ties go to the smaller h. Grid points
//! are scored on up to `threads` workers; the result does not depend on it.
//! Throws std::invalid_argument if fewer than two observations.
CvResult cv_bandwidth(const DistanceMatrix& distances,
                      std::span<const double> responses,
                      const BandwidthGrid& grid,
                      const EstimatorConfig& cfg,
                      std::size_t threads = 1);

CvResult cv_bandwidth(const Dataset& data,
                      const BandwidthGrid& grid,
                      const EstimatorConfig& cfg,
                      std::size_t threads = 1);

} // namespace fextq

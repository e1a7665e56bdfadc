#pragma once

#include <span>
#include <vector>

//! Small descriptive-statistics helpers shared by the simulation lab.
namespace fextq::stats {

//! Empirical quantile with linear interpolation between order statistics
//! (Hyndman-Fan type 7). Takes its argument by value and sorts it.
double quantile(std::vector<double> values, double p);

double mean(std::span<const double> x);

//! Sample standard deviation (n - 1 denominator).
double sd(std::span<const double> x);

double covariance(std::span<const double> x, std::span<const double> y);
double correlation(std::span<const double> x, std::span<const double> y);

double normal_cdf(double z);

//! Kolmogorov-Smirnov distance between the sample and N(0, 1).
double ks_distance_normal(std::vector<double> z);

} // namespace fextq::stats

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace crossnet::stats {

double mean(std::span<const double> x);

/// Quantile with linear interpolation between order statistics (the common
/// "type 7" rule). `sorted` must be ascending and non-empty; p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

/// Pearson correlation coefficient. Throws ValidationError when either axis
/// has zero variance or fewer than two points.
double pearson(std::span<const double> x, std::span<const double> y);

/// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
/// series/continued-fraction evaluation. a > 0, x >= 0.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Upper tail of the chi-squared distribution with dof degrees of freedom.
double chi2_sf(double statistic, int dof);

struct Chi2Result {
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson chi-squared test of independence on a contingency table.
/// Throws ValidationError when the table is smaller than 2x2 or any row or
/// column total is zero (expected counts must be positive).
Chi2Result chi2_independence(const std::vector<std::vector<std::int64_t>>& table);

/// Assigns each value to one of `bins` quantile bins. Throws ValidationError
/// if ties collapse a bin to zero occupancy (advising fewer bins).
std::vector<std::size_t> quantile_bins(std::span<const double> values, int bins);

}  // namespace crossnet::stats

#include "crossnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "crossnet/errors.hpp"

namespace crossnet::stats {

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ValidationError("quantile of empty sample");
  if (sorted.size() == 1) return sorted[0];
  double h = p * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(h);
  if (lo >= sorted.size() - 1) return sorted.back();
  double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson: size mismatch");
  if (x.size() < 2) throw ValidationError("pearson: need at least two points");
  double mx = mean(x), my = mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw ValidationError("pearson: zero variance on an axis");
  return sxy / std::sqrt(sxx * syy);
}

namespace {

// Series expansion of P(a,x), converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a,x), converges quickly for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0.0) throw ValidationError("gamma_p: a must be positive");
  if (x < 0.0) throw ValidationError("gamma_p: x must be non-negative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (a <= 0.0) throw ValidationError("gamma_q: a must be positive");
  if (x < 0.0) throw ValidationError("gamma_q: x must be non-negative");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_sf(double statistic, int dof) {
  if (dof < 1) throw ValidationError("chi2_sf: dof must be >= 1");
  if (statistic <= 0.0) return 1.0;
  return gamma_q(0.5 * static_cast<double>(dof), 0.5 * statistic);
}

Chi2Result chi2_independence(const std::vector<std::vector<std::int64_t>>& table) {
  std::size_t rows = table.size();
  if (rows < 2) throw ValidationError("chi2_independence: need >= 2 rows");
  std::size_t cols = table[0].size();
  if (cols < 2) throw ValidationError("chi2_independence: need >= 2 columns");
  for (const auto& row : table)
    if (row.size() != cols)
      throw ValidationError("chi2_independence: ragged table");

  std::vector<double> row_tot(rows, 0.0), col_tot(cols, 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (table[r][c] < 0)
        throw ValidationError("chi2_independence: negative count");
      double v = static_cast<double>(table[r][c]);
      row_tot[r] += v;
      col_tot[c] += v;
      total += v;
    }
  }
  for (double v : row_tot)
    if (v == 0.0)
      throw ValidationError(
          "chi2_independence: empty row in contingency table; use fewer bins");
  for (double v : col_tot)
    if (v == 0.0)
      throw ValidationError(
          "chi2_independence: empty column in contingency table; use fewer bins");

  double chi2 = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double expected = row_tot[r] * col_tot[c] / total;
      double diff = static_cast<double>(table[r][c]) - expected;
      chi2 += diff * diff / expected;
    }
  }
  int dof = static_cast<int>((rows - 1) * (cols - 1));
  return {chi2, dof, chi2_sf(chi2, dof)};
}

std::vector<std::size_t> quantile_bins(std::span<const double> values, int bins) {
  if (bins < 2) throw ValidationError("quantile_bins: need >= 2 bins");
  if (values.empty()) throw ValidationError("quantile_bins: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  // Upper edge of bin b is the (b+1)/bins quantile; assignment is strict on
  // the upper side so a value equal to an edge falls in the lower bin.
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(bins) - 1);
  for (int b = 1; b < bins; ++b)
    edges.push_back(quantile_sorted(sorted, static_cast<double>(b) / bins));

  std::vector<std::size_t> assign(values.size());
  std::vector<std::size_t> occupancy(static_cast<std::size_t>(bins), 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::size_t b = static_cast<std::size_t>(
        std::upper_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
    if (b >= static_cast<std::size_t>(bins)) b = static_cast<std::size_t>(bins) - 1;
    assign[i] = b;
    ++occupancy[b];
  }
  for (std::size_t b = 0; b < occupancy.size(); ++b) {
    if (occupancy[b] == 0)
      throw ValidationError("quantile_bins: bin " + std::to_string(b) +
                            " is empty (too many ties); use fewer bins");
  }
  return assign;
}

}  // namespace crossnet::stats

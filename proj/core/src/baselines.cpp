#include "trackscore/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trackscore/errors.hpp"

namespace trackscore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_compatible(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y) {
  if (x.dimension() != y.dimension()) {
    throw DimensionMismatch("cannot align paths of dimension " + std::to_string(x.dimension()) + " and " +
                            std::to_string(y.dimension()));
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

double softmin(double a, double b, double c, double gamma) {
  const double m = std::min({a, b, c});
  if (m == kInf) return kInf;
  const double s = std::exp(-(a - m) / gamma) + std::exp(-(b - m) / gamma) + std::exp(-(c - m) / gamma);
  return m - gamma * std::log(s);
}

// Runs the alignment recursion with two rolling rows. `cost(i, j)` is the ground
// cost of matching breakpoint i of x with breakpoint j of y; `combine` is min or softmin.
template <typename Cost, typename Combine>
double align(std::size_t n, std::size_t m, Cost&& cost, Combine&& combine) {
  std::vector<double> prev(m + 1, kInf);
  std::vector<double> cur(m + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = kInf;
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = cost(i - 1, j - 1) + combine(prev[j], cur[j - 1], prev[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double hard_min(double a, double b, double c) { return std::min({a, b, c}); }

}  // namespace

CostMatrix cost_matrix(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y) {
  require_compatible(x, y);
  CostMatrix c;
  c.rows = x.size();
  c.cols = y.size();
  c.entries.resize(c.rows * c.cols);
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) c.entries[i * c.cols + j] = squared_distance(x.point(i), y.point(j));
  }
  return c;
}

double dtw(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y) {
  require_compatible(x, y);
  return align(
      x.size(), y.size(), [&](std::size_t i, std::size_t j) { return squared_distance(x.point(i), y.point(j)); },
      hard_min);
}

double dtw(const CostMatrix& cost) {
  return align(cost.rows, cost.cols, [&](std::size_t i, std::size_t j) { return cost(i, j); }, hard_min);
}

double soft_dtw(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y, double gamma) {
  require_compatible(x, y);
  if (!(gamma > 0.0)) throw DomainError("soft-DTW needs gamma > 0");
  return align(
      x.size(), y.size(), [&](std::size_t i, std::size_t j) { return squared_distance(x.point(i), y.point(j)); },
      [gamma](double a, double b, double c) { return softmin(a, b, c, gamma); });
}

double soft_dtw(const CostMatrix& cost, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("soft-DTW needs gamma > 0");
  return align(
      cost.rows, cost.cols, [&](std::size_t i, std::size_t j) { return cost(i, j); },
      [gamma](double a, double b, double c) { return softmin(a, b, c, gamma); });
}

double soft_dtw_divergence(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y, double gamma) {
  return soft_dtw(x, y, gamma) - 0.5 * (soft_dtw(x, x, gamma) + soft_dtw(y, y, gamma));
}

}  // namespace trackscore

#pragma once

#include <cstddef>
#include <vector>

#include "trackscore/path.hpp"

namespace trackscore {

/// Pairwise squared Euclidean distances between the breakpoints of two paths.
struct CostMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;  // row-major

  double operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

CostMatrix cost_matrix(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y);

/// Classic dynamic time warping over monotone alignments with steps
/// (1,0), (0,1), (1,1) and squared Euclidean ground cost. No band constraint.
double dtw(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y);
double dtw(const CostMatrix& cost);

/// Soft-DTW: the same recursion with min replaced by
/// softmin_gamma(a, b, c) = -gamma log(e^-a/gamma + e^-b/gamma + e^-c/gamma).
/// Can be negative; decreases towards -infinity as gamma grows and tends to
/// dtw() as gamma -> 0. Throws DomainError unless gamma > 0.
double soft_dtw(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y, double gamma);
double soft_dtw(const CostMatrix& cost, double gamma);

/// Debiased soft-DTW divergence
/// soft_dtw(x, y) - (soft_dtw(x, x) + soft_dtw(y, y)) / 2,
/// which is zero at x == y and tends to dtw(x, y) as gamma -> 0.
double soft_dtw_divergence(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y, double gamma);

}  // namespace trackscore

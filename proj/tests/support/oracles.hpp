#pragma once

// Reference computations that share no code path with the library routines
// they check.

#include <cstddef>
#include <vector>

#include "trackscore/path.hpp"

namespace trackscore::testing {

/// Iterated integrals (int dx^{(x)m})_{m<=depth} of a piecewise-linear path by
/// direct quadrature of dS^m = S^{m-1} (x) dx: every segment is cut into
/// `subdivisions` pieces and each piece uses the trapezoid rule. Returned as
/// plain per-level arrays in lexicographic multi-index order.
inline std::vector<std::vector<double>> iterated_integrals(const PiecewiseLinearPath& x, std::size_t depth,
                                                           std::size_t subdivisions) {
  const std::size_t d = x.dimension();
  std::vector<std::vector<double>> s(depth + 1);
  std::size_t sz = 1;
  for (std::size_t m = 0; m <= depth; ++m) {
    s[m].assign(sz, 0.0);
    sz *= d;
  }
  s[0][0] = 1.0;
  std::vector<std::vector<double>> next = s;
  std::vector<double> delta(d);
  for (std::size_t seg = 0; seg < x.segments(); ++seg) {
    auto a = x.point(seg);
    auto b = x.point(seg + 1);
    for (std::size_t k = 0; k < d; ++k) delta[k] = (b[k] - a[k]) / static_cast<double>(subdivisions);
    for (std::size_t step = 0; step < subdivisions; ++step) {
      next[0][0] = 1.0;
      for (std::size_t m = 1; m <= depth; ++m) {
        const auto& lower_old = s[m - 1];
        const auto& lower_new = next[m - 1];
        for (std::size_t i = 0; i < lower_old.size(); ++i) {
          const double avg = 0.5 * (lower_old[i] + lower_new[i]);
          for (std::size_t j = 0; j < d; ++j) next[m][i * d + j] = s[m][i * d + j] + avg * delta[j];
        }
      }
      std::swap(s, next);
    }
  }
  return s;
}

/// Flattens per-level arrays into the layout of TruncatedTensor::coefficients().
inline std::vector<double> flatten(const std::vector<std::vector<double>>& levels) {
  std::vector<double> out;
  for (const auto& l : levels) out.insert(out.end(), l.begin(), l.end());
  return out;
}

}  // namespace trackscore::testing

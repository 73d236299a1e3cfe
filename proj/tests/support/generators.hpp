#pragma once

// Seeded random inputs for property-style tests.

#include <cmath>
#include <cstddef>
#include <vector>

#include "trackscore/path.hpp"
#include "trackscore/random.hpp"
#include "trackscore/tensor.hpp"

namespace trackscore::testing {

/// Coefficients uniform in [-scale, scale]; level 0 set to `scalar`.
inline TruncatedTensor random_tensor(Rng& rng, std::size_t width, std::size_t depth, double scale, double scalar) {
  TruncatedTensor t(width, depth);
  for (double& c : t.coefficients()) c = rng.uniform(-scale, scale);
  t.scalar() = scalar;
  return t;
}

inline TruncatedTensor random_unital(Rng& rng, std::size_t width, std::size_t depth, double scale = 0.5) {
  return random_tensor(rng, width, depth, scale, 1.0);
}

/// Level 0 drawn from +-[0.5, 1.5], other coefficients from [-scale, scale].
inline TruncatedTensor random_invertible(Rng& rng, std::size_t width, std::size_t depth, double scale = 0.5) {
  const double s0 = rng.uniform(0.5, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
  return random_tensor(rng, width, depth, scale, s0);
}

inline std::vector<double> random_vector(Rng& rng, std::size_t d, double sd = 1.0) {
  std::vector<double> v(d);
  for (double& x : v) x = sd * rng.normal();
  return v;
}

/// Path with Gaussian increments (standard deviation step_sd per coordinate),
/// started at a random point and timestamped 0, 1, ..., segments.
inline PiecewiseLinearPath random_path(Rng& rng, std::size_t dim, std::size_t segments, double step_sd = 0.4) {
  std::vector<double> coords((segments + 1) * dim);
  std::vector<double> times(segments + 1);
  for (std::size_t i = 0; i < dim; ++i) coords[i] = rng.uniform(-2.0, 2.0);
  for (std::size_t k = 1; k <= segments; ++k) {
    times[k] = static_cast<double>(k);
    for (std::size_t i = 0; i < dim; ++i) coords[k * dim + i] = coords[(k - 1) * dim + i] + step_sd * rng.normal();
  }
  return PiecewiseLinearPath(dim, std::move(coords), std::move(times));
}

/// ||a - b|| / scale, with scale floored at 1.
inline double rel_error(const TruncatedTensor& a, const TruncatedTensor& b, double scale) {
  return norm(sub(a, b)) / std::max(1.0, scale);
}

}  // namespace trackscore::testing

#pragma once

#include <cstddef>
#include <cstdint>

#include "trackscore/path.hpp"
#include "trackscore/random.hpp"
#include "trackscore/scoring.hpp"

namespace trackscore {

struct SimConfig {
  std::uint64_t seed = 0;
  double horizon = 1.0;      ///< T
  double resolution = 1e-2;  ///< grid step
  std::size_t dimension = 2;

  /// Throws DomainError unless 0 < resolution < horizon and dimension >= 1.
  void validate() const;
  /// Number of grid steps, round(T / resolution).
  std::size_t steps() const;
};

/// Uniform grid t_k = k * resolution, k = 0..steps().
std::vector<double> time_grid(const SimConfig& cfg);

/// Brownian motion from the origin sampled on the grid: i.i.d. N(0, resolution)
/// increments per coordinate. The Rng overload draws from a caller's stream.
PiecewiseLinearPath brownian(const SimConfig& cfg);
PiecewiseLinearPath brownian(const SimConfig& cfg, Rng& rng);

/// Time change phi(t) = t0 + (T - t0) ((t - t0) / (T - t0))^p; the output keeps
/// x's time grid and takes the values x(phi(t_k)) by linear interpolation.
/// Throws DomainError if p < 1 or x has no timestamps.
PiecewiseLinearPath power_warp(const PiecewiseLinearPath& x, double p);

/// omega ~ Uniform[0, 8 pi).
double sample_omega(Rng& rng);

/// y_t = rho t (cos omega t, sin omega t) + sqrt(1 - rho^2) x_t with x a fresh
/// two-dimensional Brownian motion on the grid of cfg (cfg.dimension is ignored).
PiecewiseLinearPath spiral_process(double rho, double omega, const SimConfig& cfg, Rng& rng);
PiecewiseLinearPath spiral_process(double rho, double omega, const SimConfig& cfg);

struct WarpedMixSample {
  PiecewiseLinearPath x;
  PiecewiseLinearPath z;
  double p;
};

/// z_t = rho x_{phi_p(t)} + sqrt(1 - rho^2) y_t for given x, y and p.
PiecewiseLinearPath warped_mix(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y, double p, double rho);

/// Draws x, then p ~ Uniform[1, 10] and an independent Brownian y.
WarpedMixSample warped_mix_process(double rho, const SimConfig& cfg, Rng& rng);
WarpedMixSample warped_mix_process(double rho, const SimConfig& cfg);

/// Exact conditional draw of z given x (fresh p and y).
PiecewiseLinearPath warped_mix_given(const PiecewiseLinearPath& x, double rho, const SimConfig& cfg, Rng& rng);

/// U = omega, X = spiral path.
class SpiralModel final : public ConditionalModel {
 public:
  SpiralModel(double rho, SimConfig cfg);
  Sampler condition(Rng& rng) const override;

 private:
  double rho_;
  SimConfig cfg_;
};

/// U = x (a Brownian path), X = z.
class WarpedMixModel final : public ConditionalModel {
 public:
  WarpedMixModel(double rho, SimConfig cfg);
  Sampler condition(Rng& rng) const override;

 private:
  double rho_;
  SimConfig cfg_;
};

}  // namespace trackscore

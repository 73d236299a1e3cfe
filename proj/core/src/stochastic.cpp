#include "trackscore/stochastic.hpp"

#include <cmath>
#include <numbers>

#include "trackscore/errors.hpp"

namespace trackscore {

namespace {

void require_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must lie in [0, 1]");
}

}  // namespace

void SimConfig::validate() const {
  if (!(resolution > 0.0)) throw DomainError("resolution must be positive");
  if (!(resolution < horizon)) throw DomainError("resolution must be smaller than the horizon");
  if (dimension == 0) throw DomainError("dimension must be positive");
}

std::size_t SimConfig::steps() const { return static_cast<std::size_t>(std::llround(horizon / resolution)); }

std::vector<double> time_grid(const SimConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.steps();
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) t[k] = static_cast<double>(k) * cfg.resolution;
  return t;
}

PiecewiseLinearPath brownian(const SimConfig& cfg, Rng& rng) {
  std::vector<double> times = time_grid(cfg);
  const std::size_t d = cfg.dimension;
  const double sd = std::sqrt(cfg.resolution);
  std::vector<double> coords(times.size() * d, 0.0);
  for (std::size_t k = 1; k < times.size(); ++k) {
    for (std::size_t i = 0; i < d; ++i) coords[k * d + i] = coords[(k - 1) * d + i] + sd * rng.normal();
  }
  return PiecewiseLinearPath(d, std::move(coords), std::move(times));
}

PiecewiseLinearPath brownian(const SimConfig& cfg) {
  Rng rng(cfg.seed);
  return brownian(cfg, rng);
}

PiecewiseLinearPath power_warp(const PiecewiseLinearPath& x, double p) {
  if (!(p >= 1.0)) throw DomainError("warp exponent p must be >= 1");
  if (!x.has_times()) throw DomainError("power_warp needs timestamps");
  const auto& times = *x.times();
  if (p == 1.0) return x;
  const double t0 = times.front();
  const double span = times.back() - t0;
  std::vector<double> coords;
  coords.reserve(x.coordinates().size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double u = k + 1 == times.size() ? 1.0 : (times[k] - t0) / span;
    const auto v = evaluate_at(x, t0 + span * std::pow(u, p));
    coords.insert(coords.end(), v.begin(), v.end());
  }
  return PiecewiseLinearPath(x.dimension(), std::move(coords), times);
}

double sample_omega(Rng& rng) { return rng.uniform(0.0, 8.0 * std::numbers::pi); }

PiecewiseLinearPath spiral_process(double rho, double omega, const SimConfig& cfg, Rng& rng) {
  require_rho(rho);
  SimConfig planar = cfg;
  planar.dimension = 2;
  const PiecewiseLinearPath noise = brownian(planar, rng);
  const auto& times = *noise.times();
  const double mix = std::sqrt(1.0 - rho * rho);
  std::vector<double> coords(times.size() * 2);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    auto b = noise.point(k);
    coords[2 * k] = rho * t * std::cos(omega * t) + mix * b[0];
    coords[2 * k + 1] = rho * t * std::sin(omega * t) + mix * b[1];
  }
  return PiecewiseLinearPath(2, std::move(coords), times);
}

PiecewiseLinearPath spiral_process(double rho, double omega, const SimConfig& cfg) {
  Rng rng(cfg.seed);
  return spiral_process(rho, omega, cfg, rng);
}

PiecewiseLinearPath warped_mix(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y, double p, double rho) {
  require_rho(rho);
  if (x.dimension() != y.dimension() || x.size() != y.size()) {
    throw DimensionMismatch("warped_mix needs x and y on the same grid");
  }
  const PiecewiseLinearPath warped = power_warp(x, p);
  const double mix = std::sqrt(1.0 - rho * rho);
  std::vector<double> coords(x.coordinates().size());
  auto a = warped.coordinates();
  auto b = y.coordinates();
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = rho * a[i] + mix * b[i];
  return PiecewiseLinearPath(x.dimension(), std::move(coords), x.times());
}

PiecewiseLinearPath warped_mix_given(const PiecewiseLinearPath& x, double rho, const SimConfig& cfg, Rng& rng) {
  require_rho(rho);
  const double p = rng.uniform(1.0, 10.0);
  const PiecewiseLinearPath y = brownian(cfg, rng);
  return warped_mix(x, y, p, rho);
}

WarpedMixSample warped_mix_process(double rho, const SimConfig& cfg, Rng& rng) {
  require_rho(rho);
  PiecewiseLinearPath x = brownian(cfg, rng);
  const double p = rng.uniform(1.0, 10.0);
  const PiecewiseLinearPath y = brownian(cfg, rng);
  PiecewiseLinearPath z = warped_mix(x, y, p, rho);
  return WarpedMixSample{std::move(x), std::move(z), p};
}

WarpedMixSample warped_mix_process(double rho, const SimConfig& cfg) {
  Rng rng(cfg.seed);
  return warped_mix_process(rho, cfg, rng);
}

SpiralModel::SpiralModel(double rho, SimConfig cfg) : rho_(rho), cfg_(cfg) {
  require_rho(rho);
  cfg_.validate();
}

ConditionalModel::Sampler SpiralModel::condition(Rng& rng) const {
  const double omega = sample_omega(rng);
  return [omega, rho = rho_, cfg = cfg_](Rng& r) { return spiral_process(rho, omega, cfg, r); };
}

WarpedMixModel::WarpedMixModel(double rho, SimConfig cfg) : rho_(rho), cfg_(cfg) {
  require_rho(rho);
  cfg_.validate();
}

ConditionalModel::Sampler WarpedMixModel::condition(Rng& rng) const {
  PiecewiseLinearPath x = brownian(cfg_, rng);
  return [x = std::move(x), rho = rho_, cfg = cfg_](Rng& r) { return warped_mix_given(x, rho, cfg, r); };
}

}  // namespace trackscore

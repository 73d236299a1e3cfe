#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trackscore/optimize.hpp"
#include "trackscore/scoring.hpp"

namespace trackscore::cli {

/// Log-spaced grid of n points from 1 to p_max inclusive (n == 1 gives {1}).
std::vector<double> log_grid(double p_max, std::size_t n);

struct WarpExperimentConfig {
  double p_max = 25.0;
  std::size_t n_p = 25;
  std::vector<double> gammas{1.0, 0.1, 0.01};
  std::size_t depth = 4;
  double resolution = 1e-2;
  double horizon = 1.0;
  std::size_t dimension = 2;
  std::size_t n_paths = 10;
  std::uint64_t seed = 0;
  unsigned threads = 0;  ///< 0 = hardware concurrency

  void validate() const;
};

struct WarpRow {
  double p;
  double geometric;
  std::vector<double> sdtw;  ///< one per gamma, same order as the config
  double dtw;
};

/// For each p, averages over n_paths Brownian paths x the distances between x
/// and power_warp(x, p): point_divergence, the debiased soft-DTW divergence per
/// gamma and dtw. Path j is drawn from the stream derive_seed(seed, j).
std::vector<WarpRow> run_warp_experiment(const WarpExperimentConfig& cfg);

void write_warp_csv(std::ostream& os, const WarpExperimentConfig& cfg, const std::vector<WarpRow>& rows);

enum class MiModel { spiral, warp };

std::string_view to_string(MiModel m);
MiModel parse_mi_model(std::string_view text);

struct MiExperimentConfig {
  MiModel model = MiModel::spiral;
  std::vector<double> rhos{0.0, 0.25, 0.5, 0.75, 1.0};
  std::size_t n_u = 20;
  std::size_t n_x = 50;
  std::size_t depth = 4;
  double resolution = 1e-2;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  Side side = Side::right;
  DescentConfig descent{0.5, 2000, 1e-10};
  unsigned threads = 0;

  void validate() const;
};

/// One row per rho. Every rho uses the same seed, so the grid shares its
/// random draws and differences between rows are not swamped by sampling noise.
std::vector<MutualInformationEstimate> run_mi_experiment(const MiExperimentConfig& cfg);

/// Writes `rho,mi,entropy,n_u,n_x,seed`.
void write_mi_csv(std::ostream& os, const MiExperimentConfig& cfg, const std::vector<MutualInformationEstimate>& rows);

}  // namespace trackscore::cli

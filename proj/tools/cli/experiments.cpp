#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "trackscore/baselines.hpp"
#include "trackscore/errors.hpp"
#include "trackscore/stochastic.hpp"
#include "trackscore/tensor_io.hpp"

namespace trackscore::cli {

namespace {

// Runs body(i) for i in [0, n) on a small pool. Results must be written to
// per-index slots; the first exception is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body body) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string gamma_label(double g) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, g);
  return "sdtw_gamma_" + std::string(buf, res.ptr);
}

}  // namespace

std::vector<double> log_grid(double p_max, std::size_t n) {
  if (!(p_max >= 1.0)) throw DomainError("p-max must be >= 1");
  if (n == 0) throw DomainError("grid needs at least one point");
  std::vector<double> out(n, 1.0);
  if (n == 1) return out;
  const double top = std::log(p_max);
  for (std::size_t k = 0; k < n; ++k) out[k] = std::exp(top * static_cast<double>(k) / static_cast<double>(n - 1));
  out.front() = 1.0;
  out.back() = p_max;
  return out;
}

void WarpExperimentConfig::validate() const {
  if (!(p_max >= 1.0)) throw DomainError("p-max must be >= 1");
  if (n_p == 0) throw DomainError("n-p must be positive");
  if (n_paths == 0) throw DomainError("n-paths must be positive");
  for (double g : gammas) {
    if (!(g > 0.0)) throw DomainError("gammas must be positive");
  }
  SimConfig{seed, horizon, resolution, dimension}.validate();
}

std::vector<WarpRow> run_warp_experiment(const WarpExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<double> ps = log_grid(cfg.p_max, cfg.n_p);

  std::vector<PiecewiseLinearPath> paths;
  paths.reserve(cfg.n_paths);
  for (std::size_t j = 0; j < cfg.n_paths; ++j) {
    Rng rng(derive_seed(cfg.seed, j));
    paths.push_back(brownian(SimConfig{cfg.seed, cfg.horizon, cfg.resolution, cfg.dimension}, rng));
  }

  std::vector<WarpRow> rows(ps.size());
  parallel_for(ps.size(), cfg.threads, [&](std::size_t k) {
    WarpRow row{ps[k], 0.0, std::vector<double>(cfg.gammas.size(), 0.0), 0.0};
    for (const auto& x : paths) {
      const PiecewiseLinearPath w = power_warp(x, ps[k]);
      row.geometric += point_divergence(x, w, cfg.depth);
      for (std::size_t g = 0; g < cfg.gammas.size(); ++g) row.sdtw[g] += soft_dtw_divergence(x, w, cfg.gammas[g]);
      row.dtw += dtw(x, w);
    }
    const double n = static_cast<double>(paths.size());
    row.geometric /= n;
    for (double& s : row.sdtw) s /= n;
    row.dtw /= n;
    rows[k] = std::move(row);
  });
  return rows;
}

void write_warp_csv(std::ostream& os, const WarpExperimentConfig& cfg, const std::vector<WarpRow>& rows) {
  os << "p,geometric_divergence";
  for (double g : cfg.gammas) os << ',' << gamma_label(g);
  os << ",dtw\n";
  for (const auto& r : rows) {
    os << format_double(r.p) << ',' << format_double(r.geometric);
    for (double s : r.sdtw) os << ',' << format_double(s);
    os << ',' << format_double(r.dtw) << '\n';
  }
}

std::string_view to_string(MiModel m) { return m == MiModel::spiral ? "spiral" : "warp"; }

MiModel parse_mi_model(std::string_view text) {
  if (text == "spiral") return MiModel::spiral;
  if (text == "warp") return MiModel::warp;
  throw DomainError("unknown model '" + std::string(text) + "' (expected spiral or warp)");
}

void MiExperimentConfig::validate() const {
  if (rhos.empty()) throw DomainError("rho grid is empty");
  for (double r : rhos) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("rho values must lie in [0, 1]");
  }
  if (n_u < 2 || n_x < 2) throw DomainError("n-u and n-x must be at least 2");
  descent.validate();
  SimConfig{seed, horizon, resolution, 2}.validate();
}

std::vector<MutualInformationEstimate> run_mi_experiment(const MiExperimentConfig& cfg) {
  cfg.validate();
  const SimConfig sim{cfg.seed, cfg.horizon, cfg.resolution, 2};
  std::vector<MutualInformationEstimate> rows(cfg.rhos.size());
  parallel_for(cfg.rhos.size(), cfg.threads, [&](std::size_t k) {
    const double rho = cfg.rhos[k];
    if (cfg.model == MiModel::spiral) {
      rows[k] = mutual_information(SpiralModel(rho, sim), cfg.n_u, cfg.n_x, cfg.side, cfg.depth, cfg.descent, cfg.seed);
    } else {
      rows[k] =
          mutual_information(WarpedMixModel(rho, sim), cfg.n_u, cfg.n_x, cfg.side, cfg.depth, cfg.descent, cfg.seed);
    }
  });
  return rows;
}

void write_mi_csv(std::ostream& os, const MiExperimentConfig& cfg, const std::vector<MutualInformationEstimate>& rows) {
  os << "rho,mi,entropy,n_u,n_x,seed\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    os << format_double(cfg.rhos[k]) << ',' << format_double(r.mi) << ',' << format_double(r.entropy) << ','
       << r.n_u << ',' << r.n_x << ',' << r.seed << '\n';
  }
}

}  // namespace trackscore::cli

#include "app.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "experiments.hpp"
#include "manifest.hpp"
#include "trackscore/errors.hpp"
#include "trackscore/path_io.hpp"
#include "trackscore/scoring.hpp"
#include "trackscore/signature.hpp"
#include "trackscore/stochastic.hpp"
#include "trackscore/tensor_io.hpp"

namespace trackscore::cli {

namespace {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::size_t depth = 4;
  std::string side = "right";
  bool time_augment = false;
  bool csv = false;
  std::string out;
  std::string manifest;

  std::size_t max_iters = 2000;
  double grad_tol = 1e-10;
  double step = 0.5;
  std::string method = "cg";

  DescentConfig descent() const {
    DescentConfig cfg;
    cfg.max_iters = max_iters;
    cfg.grad_tol = grad_tol;
    cfg.step = step;
    cfg.method = method == "gd" ? DescentMethod::gradient : DescentMethod::conjugate_gradient;
    return cfg;
  }

  void record(nlohmann::json& p) const {
    p["depth"] = depth;
    p["side"] = side;
    p["time_augment"] = time_augment;
    p["max_iters"] = max_iters;
    p["grad_tol"] = grad_tol;
    p["step"] = step;
    p["method"] = method;
  }
};

void add_depth(CLI::App* cmd, Options& o) {
  cmd->add_option("--depth", o.depth, "Truncation depth M")->capture_default_str()->check(CLI::Range(0, 12));
}

void add_side(CLI::App* cmd, Options& o) {
  cmd->add_option("--side", o.side, "Loss side")->capture_default_str()->check(CLI::IsMember({"left", "right"}));
}

void add_descent(CLI::App* cmd, Options& o) {
  cmd->add_option("--max-iters", o.max_iters, "Optimiser iteration budget")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grad-tol", o.grad_tol, "Gradient norm tolerance")->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--step", o.step, "Initial step size")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--method", o.method, "cg (conjugate gradient) or gd (gradient descent)")
      ->capture_default_str()
      ->check(CLI::IsMember({"cg", "gd"}));
}

void add_output(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out, "Output file (default: standard output); writes <out>.manifest.json");
  cmd->add_option("--manifest", o.manifest, "Manifest path when writing to standard output");
}

std::vector<NamedSeries> load_series(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open '" + path + "'");
  try {
    return read_series_csv(is);
  } catch (const ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
}

EmpiricalMeasure measure_of(const std::vector<NamedSeries>& series, bool augment, bool* synthesized = nullptr) {
  std::vector<PiecewiseLinearPath> paths;
  paths.reserve(series.size());
  for (const auto& s : series) {
    if (augment) {
      TimeAugmented a = time_augment(s.path);
      if (synthesized && a.synthesized_times) *synthesized = true;
      paths.push_back(std::move(a.path));
    } else {
      paths.push_back(s.path);
    }
  }
  return EmpiricalMeasure(std::move(paths));
}

// Sends `text` to --out (plus sidecar) or to `out` (plus --manifest if given).
void emit(const std::string& text, const Options& o, Manifest& m, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    if (!o.manifest.empty()) m.write(o.manifest);
    return;
  }
  {
    std::ofstream os(o.out, std::ios::binary);
    if (!os) throw DataError("cannot write '" + o.out + "'");
    os << text;
    if (!os) throw DataError("failed writing '" + o.out + "'");
  }
  m.outputs()["file"] = o.out;
  m.write(sidecar_path(o.out));
}

int finish_estimate(const Estimate& e, const std::string& quantity, std::size_t n_samples, const Options& o,
                    Manifest& m, std::ostream& out, std::ostream& err,
                    std::optional<std::uint64_t> seed = std::nullopt) {
  std::ostringstream text;
  if (o.csv) {
    write_result_header(text);
    write_result_row(text, ResultRecord{quantity, parse_side(o.side), o.depth, e.value, n_samples, seed,
                                        e.iterations, e.grad_norm});
  } else {
    text << format_double(e.value) << '\n';
  }
  m.outputs()["value"] = e.value;
  m.outputs()["iterations"] = e.iterations;
  m.outputs()["grad_norm"] = e.grad_norm;
  m.outputs()["converged"] = e.converged;
  emit(text.str(), o, m, out);
  if (!e.converged) {
    err << "trackscore: optimiser did not converge (grad_norm " << format_double(e.grad_norm) << ")\n";
    return kNumerical;
  }
  return kOk;
}

void record_rng(nlohmann::json& p) {
  p["rng"] = "mt19937_64 seeded with splitmix64(seed); Box-Muller normals";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proper scoring rules for tracks via path signatures", "trackscore"};
  app.set_version_flag("--version", TRACKSCORE_VERSION);
  app.require_subcommand(1);

  Options o;
  std::function<int()> action;

  // sig
  std::string sig_input;
  auto* sig = app.add_subcommand("sig", "Truncated signature of every series in a CSV file");
  sig->add_option("input", sig_input, "Long-format series CSV")->required();
  add_depth(sig, o);
  sig->add_flag("--time-augment", o.time_augment, "Prepend time as coordinate 0");
  add_output(sig, o);
  sig->callback([&] {
    action = [&] {
      const auto series = load_series(sig_input);
      Manifest m("sig");
      m.parameters()["input"] = sig_input;
      m.parameters()["depth"] = o.depth;
      m.parameters()["time_augment"] = o.time_augment;
      bool synthesized = false;
      std::ostringstream text;
      nlohmann::json ids = nlohmann::json::array();
      for (const auto& s : series) {
        PiecewiseLinearPath p = s.path;
        if (o.time_augment) {
          TimeAugmented a = time_augment(s.path);
          synthesized = synthesized || a.synthesized_times;
          p = std::move(a.path);
        }
        write_tensor(text, signature(p, o.depth));
        ids.push_back(s.id);
      }
      m.outputs()["series_ids"] = std::move(ids);
      m.outputs()["synthesized_times"] = synthesized;
      emit(text.str(), o, m, out);
      return static_cast<int>(kOk);
    };
  });

  // divergence
  std::string div_a;
  std::string div_b;
  auto* div = app.add_subcommand("divergence", "d(a, b): excess expected score of reporting b when data follow a");
  div->add_option("--a", div_a, "Series CSV for the data law")->required();
  div->add_option("--b", div_b, "Series CSV for the reported law")->required();
  add_depth(div, o);
  add_side(div, o);
  div->add_flag("--time-augment", o.time_augment, "Prepend time as coordinate 0");
  div->add_flag("--csv", o.csv, "Write a result row instead of a bare value");
  add_descent(div, o);
  add_output(div, o);
  div->callback([&] {
    action = [&] {
      const auto nu = measure_of(load_series(div_a), o.time_augment);
      const auto mu = measure_of(load_series(div_b), o.time_augment);
      Manifest m("divergence");
      o.record(m.parameters());
      m.parameters()["a"] = div_a;
      m.parameters()["b"] = div_b;
      const Estimate e = divergence(nu, mu, parse_side(o.side), o.depth, o.descent());
      return finish_estimate(e, "divergence", nu.size() + mu.size(), o, m, out, err);
    };
  });

  // entropy
  std::string ent_input;
  auto* ent = app.add_subcommand("entropy", "Generalised entropy of the empirical law of a series file");
  ent->add_option("input", ent_input, "Series CSV")->required();
  add_depth(ent, o);
  add_side(ent, o);
  ent->add_flag("--time-augment", o.time_augment, "Prepend time as coordinate 0");
  ent->add_flag("--csv", o.csv, "Write a result row instead of a bare value");
  add_descent(ent, o);
  add_output(ent, o);
  ent->callback([&] {
    action = [&] {
      const auto mu = measure_of(load_series(ent_input), o.time_augment);
      Manifest m("entropy");
      o.record(m.parameters());
      m.parameters()["input"] = ent_input;
      const Estimate e = entropy(mu, parse_side(o.side), o.depth, o.descent());
      return finish_estimate(e, "entropy", mu.size(), o, m, out, err);
    };
  });

  // score
  std::string score_x;
  std::string score_mu;
  auto* sc = app.add_subcommand("score", "Score of observed series under a forecast law (averaged over --x)");
  sc->add_option("--x", score_x, "Series CSV of observations")->required();
  sc->add_option("--mu", score_mu, "Series CSV of the forecast sample")->required();
  add_depth(sc, o);
  add_side(sc, o);
  sc->add_flag("--time-augment", o.time_augment, "Prepend time as coordinate 0");
  sc->add_flag("--csv", o.csv, "Write a result row instead of a bare value");
  add_descent(sc, o);
  add_output(sc, o);
  sc->callback([&] {
    action = [&] {
      const auto nu = measure_of(load_series(score_x), o.time_augment);
      const auto mu = measure_of(load_series(score_mu), o.time_augment);
      Manifest m("score");
      o.record(m.parameters());
      m.parameters()["x"] = score_x;
      m.parameters()["mu"] = score_mu;
      const Estimate e = expected_score(nu, mu, parse_side(o.side), o.depth, o.descent());
      return finish_estimate(e, "score", nu.size(), o, m, out, err);
    };
  });

  // mi
  std::string mi_model = "spiral";
  double mi_rho = 0.5;
  std::size_t mi_nu = 20;
  std::size_t mi_nx = 50;
  std::uint64_t seed = 0;
  double resolution = 1e-2;
  auto* mi = app.add_subcommand("mi", "Mutual information estimate for a simulated model");
  mi->add_option("--model", mi_model, "spiral (U = omega) or warp (U = x)")
      ->capture_default_str()
      ->check(CLI::IsMember({"spiral", "warp"}));
  mi->add_option("--rho", mi_rho, "Signal strength")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  mi->add_option("--n-u", mi_nu, "Conditioning draws")->capture_default_str()->check(CLI::Range(2, 1000000));
  mi->add_option("--n-x", mi_nx, "Paths per entropy estimate")->capture_default_str()->check(CLI::Range(2, 1000000));
  mi->add_option("--seed", seed, "Random seed")->capture_default_str();
  mi->add_option("--resolution", resolution, "Grid step")->capture_default_str()->check(CLI::PositiveNumber);
  add_depth(mi, o);
  add_side(mi, o);
  mi->add_flag("--csv", o.csv, "Write a result row instead of a bare value");
  add_descent(mi, o);
  add_output(mi, o);
  mi->callback([&] {
    action = [&] {
      const SimConfig sim{seed, 1.0, resolution, 2};
      Manifest m("mi");
      o.record(m.parameters());
      m.parameters()["model"] = mi_model;
      m.parameters()["rho"] = mi_rho;
      m.parameters()["n_u"] = mi_nu;
      m.parameters()["n_x"] = mi_nx;
      m.parameters()["seed"] = seed;
      m.parameters()["resolution"] = resolution;
      m.parameters()["horizon"] = 1.0;
      record_rng(m.parameters());
      MutualInformationEstimate r;
      if (parse_mi_model(mi_model) == MiModel::spiral) {
        r = mutual_information(SpiralModel(mi_rho, sim), mi_nu, mi_nx, parse_side(o.side), o.depth, o.descent(), seed);
      } else {
        r = mutual_information(WarpedMixModel(mi_rho, sim), mi_nu, mi_nx, parse_side(o.side), o.depth, o.descent(),
                               seed);
      }
      m.outputs()["entropy"] = r.entropy;
      m.outputs()["conditional_entropy"] = r.conditional_entropy;
      Estimate e{r.mi, r.iterations, r.grad_norm, r.converged};
      return finish_estimate(e, "mutual_information", mi_nu * mi_nx * 2, o, m, out, err, seed);
    };
  });

  // simulate
  std::string process = "brownian";
  std::size_t n_series = 1;
  double sim_rho = 0.5;
  double horizon = 1.0;
  std::size_t dimension = 2;
  auto* sim = app.add_subcommand("simulate", "Write simulated paths as a series CSV");
  sim->add_option("--process", process, "brownian, spiral or warp")
      ->capture_default_str()
      ->check(CLI::IsMember({"brownian", "spiral", "warp"}));
  sim->add_option("--n", n_series, "Number of series")->capture_default_str()->check(CLI::Range(1, 10000000));
  sim->add_option("--rho", sim_rho, "Signal strength (spiral, warp)")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  sim->add_option("--seed", seed, "Random seed")->capture_default_str();
  sim->add_option("--resolution", resolution, "Grid step")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--horizon", horizon, "Time horizon T")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--dimension", dimension, "Brownian dimension")->capture_default_str()->check(CLI::Range(1, 64));
  add_output(sim, o);
  sim->callback([&] {
    action = [&] {
      const SimConfig cfg{seed, horizon, resolution, dimension};
      cfg.validate();
      Manifest m("simulate");
      m.parameters()["process"] = process;
      m.parameters()["n"] = n_series;
      m.parameters()["rho"] = sim_rho;
      m.parameters()["seed"] = seed;
      m.parameters()["resolution"] = resolution;
      m.parameters()["horizon"] = horizon;
      m.parameters()["dimension"] = process == "spiral" ? 2 : dimension;
      record_rng(m.parameters());
      std::vector<NamedSeries> series;
      nlohmann::json draws = nlohmann::json::array();
      for (std::size_t i = 0; i < n_series; ++i) {
        Rng rng(derive_seed(seed, i));
        const std::string id = std::to_string(i);
        if (process == "brownian") {
          series.push_back({id, brownian(cfg, rng)});
        } else if (process == "spiral") {
          const double omega = sample_omega(rng);
          series.push_back({id, spiral_process(sim_rho, omega, cfg, rng)});
          draws.push_back({{"series_id", id}, {"omega", omega}});
        } else {
          WarpedMixSample s = warped_mix_process(sim_rho, cfg, rng);
          series.push_back({"x" + id, std::move(s.x)});
          series.push_back({"z" + id, std::move(s.z)});
          draws.push_back({{"series_id", "z" + id}, {"p", s.p}});
        }
      }
      if (!draws.empty()) m.outputs()["draws"] = std::move(draws);
      std::ostringstream text;
      write_series_csv(text, series);
      emit(text.str(), o, m, out);
      return static_cast<int>(kOk);
    };
  });

  // experiment-warp
  WarpExperimentConfig wcfg;
  auto* ew = app.add_subcommand("experiment-warp", "Distances between Brownian paths and their power-law time warps");
  ew->add_option("--p-max", wcfg.p_max, "Largest warp exponent")->capture_default_str()->check(CLI::Range(1.0, 1e6));
  ew->add_option("--n-p", wcfg.n_p, "Points on the log-spaced p grid")->capture_default_str()->check(CLI::Range(1, 100000));
  ew->add_option("--gammas", wcfg.gammas, "Soft-DTW smoothing parameters")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  ew->add_option("--depth", wcfg.depth, "Truncation depth M")->capture_default_str()->check(CLI::Range(0, 12));
  ew->add_option("--resolution", wcfg.resolution, "Grid step")->capture_default_str()->check(CLI::PositiveNumber);
  ew->add_option("--dimension", wcfg.dimension, "Brownian dimension")->capture_default_str()->check(CLI::Range(1, 64));
  ew->add_option("--n-paths", wcfg.n_paths, "Paths averaged per p")->capture_default_str()->check(CLI::Range(1, 100000));
  ew->add_option("--seed", wcfg.seed, "Random seed")->capture_default_str();
  ew->add_option("--threads", wcfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  add_output(ew, o);
  ew->callback([&] {
    action = [&] {
      Manifest m("experiment-warp");
      auto& p = m.parameters();
      p["p_max"] = wcfg.p_max;
      p["n_p"] = wcfg.n_p;
      p["p_grid"] = "log-spaced";
      p["gammas"] = wcfg.gammas;
      p["depth"] = wcfg.depth;
      p["resolution"] = wcfg.resolution;
      p["horizon"] = wcfg.horizon;
      p["dimension"] = wcfg.dimension;
      p["n_paths"] = wcfg.n_paths;
      p["seed"] = wcfg.seed;
      p["time_augment"] = false;
      p["ground_cost"] = "squared_euclidean";
      p["sdtw_columns"] = "debiased soft-DTW divergence";
      record_rng(p);
      std::ostringstream text;
      write_warp_csv(text, wcfg, run_warp_experiment(wcfg));
      emit(text.str(), o, m, out);
      return static_cast<int>(kOk);
    };
  });

  // experiment-mi-scalar / experiment-mi-warp
  MiExperimentConfig mcfg;
  auto add_mi_experiment = [&](const char* name, const char* help, MiModel model) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--rhos", mcfg.rhos, "Signal strengths")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--n-u", mcfg.n_u, "Conditioning draws")->capture_default_str()->check(CLI::Range(2, 1000000));
    cmd->add_option("--n-x", mcfg.n_x, "Paths per entropy estimate")
        ->capture_default_str()
        ->check(CLI::Range(2, 1000000));
    cmd->add_option("--depth", mcfg.depth, "Truncation depth M")->capture_default_str()->check(CLI::Range(0, 12));
    cmd->add_option("--seed", mcfg.seed, "Random seed")->capture_default_str();
    cmd->add_option("--resolution", mcfg.resolution, "Grid step")->capture_default_str()->check(CLI::PositiveNumber);
    add_side(cmd, o);
    add_descent(cmd, o);
    cmd->add_option("--threads", mcfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
    add_output(cmd, o);
    cmd->callback([&, model, name] {
      action = [&, model, name] {
        mcfg.model = model;
        mcfg.side = parse_side(o.side);
        mcfg.descent = o.descent();
        Manifest m(name);
        auto& p = m.parameters();
        p["model"] = to_string(model);
        p["rhos"] = mcfg.rhos;
        p["n_u"] = mcfg.n_u;
        p["n_x"] = mcfg.n_x;
        p["depth"] = mcfg.depth;
        p["side"] = o.side;
        p["seed"] = mcfg.seed;
        p["resolution"] = mcfg.resolution;
        p["horizon"] = mcfg.horizon;
        p["max_iters"] = o.max_iters;
        p["grad_tol"] = o.grad_tol;
        p["method"] = o.method;
        p["estimator"] = "conditional resampling, n_x marginal paths per conditioning draw";
        record_rng(p);
        const auto rows = run_mi_experiment(mcfg);
        bool converged = true;
        for (const auto& r : rows) converged = converged && r.converged;
        m.outputs()["converged"] = converged;
        std::ostringstream text;
        write_mi_csv(text, mcfg, rows);
        emit(text.str(), o, m, out);
        if (!converged) {
          err << "trackscore: optimiser did not converge for at least one rho\n";
          return static_cast<int>(kNumerical);
        }
        return static_cast<int>(kOk);
      };
    });
  };
  add_mi_experiment("experiment-mi-scalar", "Mutual information between the spiral path and its rotation speed",
                    MiModel::spiral);
  add_mi_experiment("experiment-mi-warp", "Mutual information between a Brownian path and its warped mixture",
                    MiModel::warp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  // Malformed files, inconsistent dimensions and out-of-domain data all map
  // to the data exit code; invalid flags were already rejected by the parser.
  try {
    return action();
  } catch (const std::exception& e) {
    err << "trackscore: " << e.what() << '\n';
    return kData;
  }
}

}  // namespace trackscore::cli

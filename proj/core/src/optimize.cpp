#include "trackscore/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "trackscore/errors.hpp"
#include "trackscore/tensor_io.hpp"

namespace trackscore {

namespace {

// Each rejected trial halves the step; after this many in a row we give up.
constexpr int kMaxHalvings = 60;

void axpy(TruncatedTensor& y, double a, const TruncatedTensor& x) {
  auto yc = y.coefficients();
  auto xc = x.coefficients();
  for (std::size_t i = 0; i < yc.size(); ++i) yc[i] += a * xc[i];
}

TruncatedTensor shifted(const TruncatedTensor& x, double a, const TruncatedTensor& dir) {
  TruncatedTensor out = x;
  axpy(out, a, dir);
  return out;
}

void record(DescentReport& report, const DescentConfig& cfg, std::size_t iter, double f, double gn, double step) {
  if (cfg.record_trace) report.trace.push_back(TraceRow{iter, f, gn, step});
}

// Moves `v` times the degree-one direction onto the right of g.
TruncatedTensor right_exp(const TruncatedTensor& g, std::span<const double> v) {
  TruncatedTensor out = g;
  mul_exp_inplace(out, v);
  return out;
}

}  // namespace

void DescentConfig::validate() const {
  if (!(step > 0.0)) throw DomainError("descent step must be positive");
  if (!(grad_tol > 0.0)) throw DomainError("gradient tolerance must be positive");
  if (max_iters == 0) throw DomainError("max_iters must be positive");
}

void write_trace_csv(std::ostream& os, std::span<const TraceRow> trace) {
  os << "iter,objective,grad_norm,step\n";
  for (const auto& row : trace) {
    os << row.iter << ',' << format_double(row.objective) << ',' << format_double(row.grad_norm) << ','
       << format_double(row.step) << '\n';
  }
}

DescentResult affine_descent(const AffineObjective& objective, TruncatedTensor start, const DescentConfig& cfg) {
  cfg.validate();
  if (!is_unital(start)) throw DomainError("affine descent must start on the unital slice");
  start.scalar() = 1.0;

  auto projected_gradient = [&](const TruncatedTensor& x) {
    TruncatedTensor g = objective.gradient(x);
    require_same_shape(g, x);
    g.scalar() = 0.0;
    return g;
  };

  DescentReport report;
  TruncatedTensor x = std::move(start);
  double f = objective.value(x);
  TruncatedTensor g = projected_gradient(x);
  double gn = norm(g);
  double eta = cfg.step;
  record(report, cfg, 0, f, gn, 0.0);

  // Conjugate-gradient state.
  TruncatedTensor dir = scale(-1.0, g);
  const std::size_t restart_every = std::max<std::size_t>(1, total_size(x.width(), x.depth()) - 1);
  std::size_t since_restart = 0;

  struct Point {
    TruncatedTensor x;
    double f;
    TruncatedTensor g;
    double gn;
  };
  auto evaluate = [&](TruncatedTensor y) {
    const double fy = objective.value(y);
    TruncatedTensor gy = projected_gradient(y);
    const double gny = norm(gy);
    return Point{std::move(y), fy, std::move(gy), gny};
  };
  // Near the minimiser true decreases fall below the resolution of f, so a
  // step that leaves f unchanged to rounding is taken if the gradient shrinks.
  auto acceptable = [&](const Point& p) {
    if (p.f < f) return true;
    const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(f);
    return p.f <= f + rounding && p.gn < gn;
  };

  std::size_t iter = 0;
  while (iter < cfg.max_iters) {
    if (gn <= cfg.grad_tol) break;
    ++iter;

    std::optional<Point> next;
    double accepted_step = 0.0;

    if (cfg.method == DescentMethod::gradient) {
      int halvings = 0;
      while (true) {
        Point p = evaluate(shifted(x, -eta, g));
        if (acceptable(p)) {
          next = std::move(p);
          break;
        }
        eta *= 0.5;
        ++report.halvings;
        if (++halvings > kMaxHalvings) {
          report.step_underflow = true;
          break;
        }
      }
      accepted_step = eta;
    } else {
      double slope = inner(g, dir);
      if (!(slope < 0.0) || since_restart >= restart_every) {
        dir = scale(-1.0, g);
        slope = -gn * gn;
        since_restart = 0;
      }
      // Secant on the directional derivative; exact for quadratics and, unlike
      // differences of f, accurate all the way down to the minimiser.
      const double alpha = eta;
      Point trial = evaluate(shifted(x, alpha, dir));
      const double curvature = (inner(trial.g, dir) - slope) / alpha;
      double a = alpha;
      if (curvature > 0.0) {
        const double alpha_star = -slope / curvature;
        Point fitted = evaluate(shifted(x, alpha_star, dir));
        if (acceptable(fitted)) {
          next = std::move(fitted);
          accepted_step = alpha_star;
        } else {
          a = std::min(a, alpha_star);
        }
      }
      if (!next && acceptable(trial)) {
        next = std::move(trial);
        accepted_step = alpha;
      }
      int halvings = 0;
      while (!next) {
        a *= 0.5;
        ++report.halvings;
        if (++halvings > kMaxHalvings) {
          report.step_underflow = true;
          break;
        }
        Point p = evaluate(shifted(x, a, dir));
        if (acceptable(p)) {
          next = std::move(p);
          accepted_step = a;
        }
      }
      if (next) eta = accepted_step;
    }

    if (!next) break;

    if (cfg.method == DescentMethod::conjugate_gradient) {
      const double gg = gn * gn;
      const double beta = std::max(0.0, (inner(next->g, next->g) - inner(next->g, g)) / gg);
      TruncatedTensor next_dir = scale(-1.0, next->g);
      axpy(next_dir, beta, dir);
      dir = std::move(next_dir);
      ++since_restart;
    }
    x = std::move(next->x);
    f = next->f;
    g = std::move(next->g);
    gn = next->gn;
    record(report, cfg, iter, f, gn, accepted_step);
  }

  report.iterations = iter;
  report.objective = f;
  report.grad_norm = gn;
  report.converged = gn <= cfg.grad_tol;
  return {std::move(x), std::move(report)};
}

std::vector<double> pansu_gradient(const GroupObjective& f, const TruncatedTensor& g) {
  if (!f.euclidean_gradient) return pansu_gradient_fd(f.value, g);
  const TruncatedTensor grad = f.euclidean_gradient(g);
  require_same_shape(grad, g);
  const std::size_t d = g.width();
  std::vector<double> out(d, 0.0);
  // d/deta f(g exp(eta e_i)) = <grad, g (0, e_i, 0, ...)>, and level m of
  // g (0, e_i, 0, ...) is g_{m-1} (x) e_i.
  for (std::size_t m = 1; m <= g.depth(); ++m) {
    auto lower = g.level(m - 1);
    auto gm = grad.level(m);
    for (std::size_t a = 0; a < lower.size(); ++a) {
      for (std::size_t i = 0; i < d; ++i) out[i] += gm[a * d + i] * lower[a];
    }
  }
  return out;
}

std::vector<double> pansu_gradient_fd(const std::function<double(const TruncatedTensor&)>& f,
                                      const TruncatedTensor& g, double h) {
  const std::size_t d = g.width();
  const double step = h * std::max(1.0, norm(g));
  std::vector<double> out(d);
  std::vector<double> v(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    v[i] = step;
    const double plus = f(right_exp(g, v));
    v[i] = -step;
    const double minus = f(right_exp(g, v));
    v[i] = 0.0;
    out[i] = (plus - minus) / (2.0 * step);
  }
  return out;
}

DescentResult pansu_descent(const GroupObjective& f, TruncatedTensor start, const DescentConfig& cfg) {
  cfg.validate();
  if (!is_grouplike(start)) throw DomainError("pansu descent must start at a group-like element");

  DescentReport report;
  TruncatedTensor g = std::move(start);
  double value = f.value(g);
  std::vector<double> grad = pansu_gradient(f, g);
  auto l2 = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  double gn = l2(grad);
  double eta = cfg.step;
  record(report, cfg, 0, value, gn, 0.0);

  std::size_t iter = 0;
  std::vector<double> move(g.width());
  while (iter < cfg.max_iters) {
    if (gn <= cfg.grad_tol) break;
    ++iter;
    int halvings = 0;
    TruncatedTensor candidate = g;
    double f_candidate = value;
    while (true) {
      for (std::size_t i = 0; i < move.size(); ++i) move[i] = -eta * grad[i];
      candidate = right_exp(g, move);
      f_candidate = f.value(candidate);
      if (f_candidate < value) break;
      eta *= 0.5;
      ++report.halvings;
      if (++halvings > kMaxHalvings) {
        report.step_underflow = true;
        break;
      }
    }
    if (report.step_underflow) break;
    g = std::move(candidate);
    value = f_candidate;
    grad = pansu_gradient(f, g);
    gn = l2(grad);
    record(report, cfg, iter, value, gn, eta);
  }

  report.iterations = iter;
  report.objective = value;
  report.grad_norm = gn;
  report.converged = gn <= cfg.grad_tol;
  return {std::move(g), std::move(report)};
}

TaylorReport taylor_check(const GroupObjective& f, const TruncatedTensor& g, const TruncatedTensor& h,
                          std::span<const double> eta_grid) {
  if (eta_grid.size() < 3) throw DomainError("taylor_check needs at least three step sizes");
  require_same_shape(g, h);
  auto l1 = h.level(1);
  std::vector<double> v(l1.begin(), l1.end());
  if (norm(sub(h, exp_of_vector(v, h.depth()))) > 1e-12 * (1.0 + norm(h))) {
    throw DomainError("taylor_check direction must be the exponential of a vector");
  }
  for (double eta : eta_grid) {
    if (!(eta > 0.0)) throw DomainError("step sizes must be positive");
  }

  const double f0 = f.value(g);
  const std::vector<double> df = pansu_gradient(f, g);
  double directional = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) directional += df[i] * v[i];

  TaylorReport report;
  std::vector<double> scaled(v.size());
  for (double eta : eta_grid) {
    for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = eta * v[i];
    const double fe = f.value(right_exp(g, scaled));
    report.etas.push_back(eta);
    report.remainders.push_back(std::abs(fe - f0 - eta * directional));
  }

  const double floor = 1e-13 * (1.0 + std::abs(f0));
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < report.etas.size(); ++k) {
    if (report.remainders[k] > floor) {
      xs.push_back(std::log(report.etas[k]));
      ys.push_back(std::log(report.remainders[k]));
    }
  }
  if (xs.size() < 2) {
    report.degenerate = true;
    return report;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  report.slope = sxy / sxx;
  report.degenerate = xs.size() < eta_grid.size();
  return report;
}

ConvexityReport geometric_convexity_check(const std::function<double(const TruncatedTensor&)>& f,
                                          std::span<const TruncatedTensor> gs,
                                          std::span<const TruncatedTensor> hs,
                                          std::span<const double> lambdas) {
  if (gs.size() != hs.size()) throw DimensionMismatch("need as many g as h samples");
  ConvexityReport report;
  report.worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < gs.size(); ++k) {
    const double fg = f(gs[k]);
    const double fh = f(hs[k]);
    const TruncatedTensor step = mul(inverse(gs[k]), hs[k]);
    for (double lambda : lambdas) {
      const double lhs = f(mul(gs[k], dilate(lambda, step)));
      const double rhs = (1.0 - lambda) * fg + lambda * fh;
      const double excess = lhs - rhs;
      ++report.samples;
      report.worst_excess = std::max(report.worst_excess, excess);
      if (excess > 1e-12 * (1.0 + std::abs(rhs))) ++report.violations;
    }
  }
  return report;
}

}  // namespace trackscore

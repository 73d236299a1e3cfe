#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "trackscore/tensor.hpp"

namespace trackscore {

enum class DescentMethod {
  gradient,            ///< fixed step, halved whenever a step would increase the objective
  conjugate_gradient,  ///< Polak-Ribiere+ directions with a secant line search on the slope
};

struct DescentConfig {
  double step = 0.5;          ///< eta; initial trial step for the line search
  std::size_t max_iters = 2000;
  double grad_tol = 1e-10;    ///< l2 norm of the gradient at which we stop
  bool record_trace = false;
  DescentMethod method = DescentMethod::conjugate_gradient;

  /// Throws DomainError unless step > 0, grad_tol > 0 and max_iters > 0.
  void validate() const;
};

struct TraceRow {
  std::size_t iter;
  double objective;
  double grad_norm;
  double step;
};

struct DescentReport {
  std::size_t iterations = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  bool converged = false;      ///< grad_norm <= grad_tol
  bool step_underflow = false; ///< no decrease found even for a vanishing step
  std::size_t halvings = 0;    ///< rejected steps (each halves eta)
  std::vector<TraceRow> trace;
};

/// Writes `iter,objective,grad_norm,step`.
void write_trace_csv(std::ostream& os, std::span<const TraceRow> trace);

/// Differentiable functional on the unital slice {t : t_0 = 1}. The gradient is
/// the Euclidean one in H; its level-0 part is ignored.
struct AffineObjective {
  std::function<double(const TruncatedTensor&)> value;
  std::function<TruncatedTensor(const TruncatedTensor&)> gradient;
};

struct DescentResult {
  TruncatedTensor minimizer;
  DescentReport report;
};

/// Minimises over unital tensors, moving only levels 1..M. Accepted iterates
/// never increase the objective by more than its rounding error, and do so
/// only when the gradient norm shrinks.
DescentResult affine_descent(const AffineObjective& objective, TruncatedTensor start,
                             const DescentConfig& cfg);

/// Functional on the group of group-like elements. `euclidean_gradient` is the
/// gradient of f viewed as a function on the ambient space H; leave it empty to
/// fall back to central finite differences.
struct GroupObjective {
  std::function<double(const TruncatedTensor&)> value;
  std::function<TruncatedTensor(const TruncatedTensor&)> euclidean_gradient;
};

/// Pansu derivative restricted to degree-one directions:
/// component i = d/deta f(g exp(eta e_i)) at eta = 0.
std::vector<double> pansu_gradient(const GroupObjective& f, const TruncatedTensor& g);

/// Central-difference version of pansu_gradient with step h (scaled by max(1, ||g||)).
std::vector<double> pansu_gradient_fd(const std::function<double(const TruncatedTensor&)>& f,
                                      const TruncatedTensor& g, double h = 1e-5);

/// g_{k+1} = g_k exp(-eta Df(g_k)), halving eta whenever the objective would rise.
DescentResult pansu_descent(const GroupObjective& f, TruncatedTensor start, const DescentConfig& cfg);

struct TaylorReport {
  std::vector<double> etas;
  std::vector<double> remainders;  ///< |f(g exp(eta v)) - f(g) - eta Df(g) v|
  double slope = 0.0;              ///< least-squares slope of log remainder vs log eta
  bool degenerate = false;         ///< remainders sit at the rounding floor; slope meaningless
};

/// First-order expansion check along h = exp(v). Throws DomainError when the
/// grid has fewer than three points or h is not the exponential of its level 1.
TaylorReport taylor_check(const GroupObjective& f, const TruncatedTensor& g, const TruncatedTensor& h,
                          std::span<const double> eta_grid);

struct ConvexityReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  ///< max of f(g dil_lambda(g^-1 h)) - ((1-lambda) f(g) + lambda f(h))
};

/// Diagnostic for geometric convexity over all (g_i, h_i, lambda_j) triples.
ConvexityReport geometric_convexity_check(const std::function<double(const TruncatedTensor&)>& f,
                                          std::span<const TruncatedTensor> gs,
                                          std::span<const TruncatedTensor> hs,
                                          std::span<const double> lambdas);

}  // namespace trackscore

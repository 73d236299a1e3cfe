#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trackscore/optimize.hpp"
#include "trackscore/path.hpp"
#include "trackscore/random.hpp"
#include "trackscore/tensor.hpp"

namespace trackscore {

enum class Side { left, right };

std::string_view to_string(Side side);
/// Accepts "left" or "right"; throws DomainError otherwise.
Side parse_side(std::string_view text);

/// L(t) = sum_{m=1..M} w_m ||t_m||^2. Level 0 never contributes. Empty
/// level_weights means w_m = 1 for every level.
struct SquaredNormLoss {
  std::vector<double> level_weights;

  double operator()(const TruncatedTensor& t) const;
  /// Euclidean gradient: 2 w_m t_m on levels >= 1, zero at level 0.
  TruncatedTensor gradient(const TruncatedTensor& t) const;

 private:
  double weight(std::size_t m) const;
};

/// L with unit weights.
double loss_L(const TruncatedTensor& t);

/// Finite weighted collection of paths (uniform weights by default).
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(std::vector<PiecewiseLinearPath> paths);
  /// Weights must be nonnegative; they are normalised to sum to one.
  EmpiricalMeasure(std::vector<PiecewiseLinearPath> paths, std::vector<double> weights);

  const std::vector<PiecewiseLinearPath>& paths() const noexcept { return paths_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return paths_.size(); }
  std::size_t dimension() const noexcept { return paths_.front().dimension(); }

  /// lambda * a + (1 - lambda) * b.
  static EmpiricalMeasure mixture(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double lambda);

  /// Law of the time-reversed paths.
  EmpiricalMeasure reversed() const;

 private:
  std::vector<PiecewiseLinearPath> paths_;
  std::vector<double> weights_;
};

/// An empirical measure pushed forward to signature space at a fixed depth.
struct SignatureMeasure {
  std::vector<TruncatedTensor> signatures;
  std::vector<double> weights;

  static SignatureMeasure of(const EmpiricalMeasure& mu, std::size_t depth);
  std::size_t depth() const { return signatures.front().depth(); }
  std::size_t width() const { return signatures.front().width(); }
};

/// Loss of observing a path with signature `sig` after reporting action m:
/// left: L(m^-1 sig), right: L(sig m^-1). m must be unital.
double side_loss(Side side, const TruncatedTensor& sig, const TruncatedTensor& act,
                 const SquaredNormLoss& loss = {});

double left_loss(const PiecewiseLinearPath& x, const TruncatedTensor& act, const SquaredNormLoss& loss = {});
double right_loss(const PiecewiseLinearPath& x, const TruncatedTensor& act, const SquaredNormLoss& loss = {});

struct BayesAct {
  TruncatedTensor value;  ///< unital
  Side side;
  DescentReport diagnostics;
};

/// psi(x) = E L(sig x) (right) or E L(x sig) (left) over the unital slice, with
/// the analytic gradient. Its minimiser is the inverse of the Bayes act.
AffineObjective bayes_objective(const SignatureMeasure& mu, Side side, const SquaredNormLoss& loss = {});

/// Minimiser over unital m of the expected side loss. The optimiser runs in
/// x = m^-1, starting from the inverse of `initial_act` (default: the expected
/// signature). A run that exhausts its budget still returns its best iterate
/// with diagnostics.converged == false.
BayesAct bayes_act(const SignatureMeasure& mu, Side side, const DescentConfig& cfg,
                   const SquaredNormLoss& loss = {},
                   const std::optional<TruncatedTensor>& initial_act = std::nullopt);
BayesAct bayes_act(const EmpiricalMeasure& mu, Side side, std::size_t depth, const DescentConfig& cfg,
                   const SquaredNormLoss& loss = {},
                   const std::optional<TruncatedTensor>& initial_act = std::nullopt);

/// A scalar estimate together with the optimiser diagnostics behind it.
struct Estimate {
  double value = 0.0;
  std::size_t iterations = 0;  ///< summed over every Bayes act computed
  double grad_norm = 0.0;      ///< worst final gradient norm
  bool converged = true;
};

/// Side loss of x under the Bayes act of mu.
Estimate score(const PiecewiseLinearPath& x, const EmpiricalMeasure& mu, Side side, std::size_t depth,
               const DescentConfig& cfg, const SquaredNormLoss& loss = {});

/// nu-expected score of mu: E_{X~nu}[side_loss(X, a_mu)].
Estimate expected_score(const EmpiricalMeasure& nu, const EmpiricalMeasure& mu, Side side, std::size_t depth,
                        const DescentConfig& cfg, const SquaredNormLoss& loss = {});

/// H(mu) = E_{X~mu}[side_loss(X, a_mu)].
Estimate entropy(const SignatureMeasure& mu, Side side, const DescentConfig& cfg, const SquaredNormLoss& loss = {});
Estimate entropy(const EmpiricalMeasure& mu, Side side, std::size_t depth, const DescentConfig& cfg,
                 const SquaredNormLoss& loss = {});

/// d(nu, mu) = E_{X~nu}[side_loss(X, a_mu) - side_loss(X, a_nu)]. Not clamped.
Estimate divergence(const EmpiricalMeasure& nu, const EmpiricalMeasure& mu, Side side, std::size_t depth,
                    const DescentConfig& cfg, const SquaredNormLoss& loss = {});

/// Divergence between point masses: L(sig(x) sig(y)^-1).
double point_divergence(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y, std::size_t depth,
                        const SquaredNormLoss& loss = {});

/// Weighted mean of signatures (the Bayes act of the flat, linear score).
TruncatedTensor expected_signature(const EmpiricalMeasure& mu, std::size_t depth);
TruncatedTensor expected_signature(const SignatureMeasure& mu);

/// ||E sig(X) - E sig(Y)||^2.
double linear_divergence(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, std::size_t depth);

/// Joint model of (U, X) that can sample X exactly given a drawn U.
class ConditionalModel {
 public:
  using Sampler = std::function<PiecewiseLinearPath(Rng&)>;
  virtual ~ConditionalModel() = default;
  /// Draws U = u from its marginal and returns a sampler for X | U = u.
  virtual Sampler condition(Rng& rng) const = 0;
};

struct MutualInformationEstimate {
  double mi = 0.0;
  double entropy = 0.0;              ///< mean unconditional entropy
  double conditional_entropy = 0.0;  ///< mean over u_k of H(mu | U = u_k)
  std::size_t n_u = 0;
  std::size_t n_x = 0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  double grad_norm = 0.0;
  bool converged = true;
};

/// I = H(mu) - E_U[H(mu | U)] by conditional resampling. For each of n_u draws
/// u_k, n_x paths are sampled from X | U = u_k and, independently, n_x paths from
/// the marginal of X; both entropies therefore carry the same finite-sample bias.
/// Draw k uses the sub-streams derive_seed(seed, 2k) and derive_seed(seed, 2k + 1).
MutualInformationEstimate mutual_information(const ConditionalModel& model, std::size_t n_u, std::size_t n_x,
                                             Side side, std::size_t depth, const DescentConfig& cfg,
                                             std::uint64_t seed, const SquaredNormLoss& loss = {});

/// One row of `quantity,side,depth,value,n_samples,seed,iterations,grad_norm`.
struct ResultRecord {
  std::string quantity;
  Side side = Side::right;
  std::size_t depth = 0;
  double value = 0.0;
  std::size_t n_samples = 0;
  std::optional<std::uint64_t> seed;
  std::size_t iterations = 0;
  double grad_norm = 0.0;
};

void write_result_header(std::ostream& os);
void write_result_row(std::ostream& os, const ResultRecord& r);

}  // namespace trackscore

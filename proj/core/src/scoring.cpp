#include "trackscore/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "trackscore/errors.hpp"
#include "trackscore/signature.hpp"
#include "trackscore/tensor_io.hpp"

namespace trackscore {

namespace {

constexpr double kUnitalTol = 1e-12;

void require_unital(const TruncatedTensor& act) {
  if (!is_unital(act, kUnitalTol)) {
    throw DomainError("action is not unital: level 0 = " + format_double(act.scalar()));
  }
}

std::vector<double> normalized(std::vector<double> w, std::size_t n) {
  if (w.size() != n) throw DimensionMismatch("need one weight per path");
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("weights must be finite and nonnegative");
    total += x;
  }
  if (!(total > 0.0)) throw DomainError("weights sum to zero");
  for (double& x : w) x /= total;
  return w;
}

// Loss given the already inverted action.
double loss_with_inverse(Side side, const TruncatedTensor& sig, const TruncatedTensor& act_inv,
                         const SquaredNormLoss& loss) {
  return side == Side::right ? loss(mul(sig, act_inv)) : loss(mul(act_inv, sig));
}

double expected_loss(const SignatureMeasure& nu, Side side, const TruncatedTensor& act, const SquaredNormLoss& loss) {
  require_unital(act);
  const TruncatedTensor act_inv = inverse(act);
  double acc = 0.0;
  for (std::size_t i = 0; i < nu.signatures.size(); ++i) {
    acc += nu.weights[i] * loss_with_inverse(side, nu.signatures[i], act_inv, loss);
  }
  return acc;
}

void absorb(Estimate& e, const DescentReport& r) {
  e.iterations += r.iterations;
  e.grad_norm = std::max(e.grad_norm, r.grad_norm);
  e.converged = e.converged && r.converged;
}

}  // namespace

std::string_view to_string(Side side) { return side == Side::left ? "left" : "right"; }

Side parse_side(std::string_view text) {
  if (text == "left") return Side::left;
  if (text == "right") return Side::right;
  throw DomainError("side must be 'left' or 'right', got '" + std::string(text) + "'");
}

double SquaredNormLoss::weight(std::size_t m) const {
  if (level_weights.empty()) return 1.0;
  if (m >= level_weights.size()) throw DimensionMismatch("loss has no weight for level " + std::to_string(m));
  return level_weights[m];
}

double SquaredNormLoss::operator()(const TruncatedTensor& t) const {
  double acc = 0.0;
  for (std::size_t m = 1; m <= t.depth(); ++m) {
    double lvl = 0.0;
    for (double c : t.level(m)) lvl += c * c;
    acc += weight(m) * lvl;
  }
  return acc;
}

TruncatedTensor SquaredNormLoss::gradient(const TruncatedTensor& t) const {
  TruncatedTensor g(t.width(), t.depth());
  for (std::size_t m = 1; m <= t.depth(); ++m) {
    auto src = t.level(m);
    auto dst = g.level(m);
    const double w = 2.0 * weight(m);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = w * src[i];
  }
  return g;
}

double loss_L(const TruncatedTensor& t) { return SquaredNormLoss{}(t); }

EmpiricalMeasure::EmpiricalMeasure(std::vector<PiecewiseLinearPath> paths)
    : EmpiricalMeasure(std::move(paths), {}) {}

EmpiricalMeasure::EmpiricalMeasure(std::vector<PiecewiseLinearPath> paths, std::vector<double> weights)
    : paths_(std::move(paths)) {
  if (paths_.empty()) throw DomainError("empirical measure needs at least one path");
  for (const auto& p : paths_) {
    if (p.dimension() != paths_.front().dimension()) throw DimensionMismatch("paths of mixed dimension");
  }
  if (weights.empty()) weights.assign(paths_.size(), 1.0);
  weights_ = normalized(std::move(weights), paths_.size());
}

EmpiricalMeasure EmpiricalMeasure::mixture(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("mixture weight must lie in [0, 1]");
  std::vector<PiecewiseLinearPath> paths = a.paths_;
  paths.insert(paths.end(), b.paths_.begin(), b.paths_.end());
  std::vector<double> w;
  w.reserve(paths.size());
  for (double x : a.weights_) w.push_back(lambda * x);
  for (double x : b.weights_) w.push_back((1.0 - lambda) * x);
  return EmpiricalMeasure(std::move(paths), std::move(w));
}

EmpiricalMeasure EmpiricalMeasure::reversed() const {
  std::vector<PiecewiseLinearPath> paths;
  paths.reserve(paths_.size());
  for (const auto& p : paths_) paths.push_back(reverse(p));
  return EmpiricalMeasure(std::move(paths), weights_);
}

SignatureMeasure SignatureMeasure::of(const EmpiricalMeasure& mu, std::size_t depth) {
  return SignatureMeasure{trackscore::signatures(mu.paths(), depth), mu.weights()};
}

double side_loss(Side side, const TruncatedTensor& sig, const TruncatedTensor& act, const SquaredNormLoss& loss) {
  require_same_shape(sig, act);
  require_unital(act);
  return loss_with_inverse(side, sig, inverse(act), loss);
}

double left_loss(const PiecewiseLinearPath& x, const TruncatedTensor& act, const SquaredNormLoss& loss) {
  return side_loss(Side::left, signature(x, act.depth()), act, loss);
}

double right_loss(const PiecewiseLinearPath& x, const TruncatedTensor& act, const SquaredNormLoss& loss) {
  return side_loss(Side::right, signature(x, act.depth()), act, loss);
}

AffineObjective bayes_objective(const SignatureMeasure& mu, Side side, const SquaredNormLoss& loss) {
  if (mu.signatures.empty()) throw DomainError("empty measure");
  AffineObjective obj;
  obj.value = [&mu, side, loss](const TruncatedTensor& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.signatures.size(); ++i) {
      const auto& s = mu.signatures[i];
      acc += mu.weights[i] * loss(side == Side::right ? mul(s, x) : mul(x, s));
    }
    return acc;
  };
  obj.gradient = [&mu, side, loss](const TruncatedTensor& x) {
    TruncatedTensor g(x.width(), x.depth());
    for (std::size_t i = 0; i < mu.signatures.size(); ++i) {
      const auto& s = mu.signatures[i];
      TruncatedTensor term = side == Side::right ? lmul_adjoint(s, loss.gradient(mul(s, x)))
                                                 : rmul_adjoint(s, loss.gradient(mul(x, s)));
      term *= mu.weights[i];
      g += term;
    }
    g.scalar() = 0.0;
    return g;
  };
  return obj;
}

BayesAct bayes_act(const SignatureMeasure& mu, Side side, const DescentConfig& cfg, const SquaredNormLoss& loss,
                   const std::optional<TruncatedTensor>& initial_act) {
  if (mu.signatures.empty()) throw DomainError("empty measure");
  if (mu.weights.size() != mu.signatures.size()) throw DimensionMismatch("need one weight per signature");
  TruncatedTensor start_act = initial_act ? *initial_act : expected_signature(mu);
  require_same_shape(start_act, mu.signatures.front());
  require_unital(start_act);
  TruncatedTensor x0 = inverse(start_act);
  x0.scalar() = 1.0;
  const AffineObjective obj = bayes_objective(mu, side, loss);
  DescentResult result = affine_descent(obj, std::move(x0), cfg);
  TruncatedTensor act = inverse(result.minimizer);
  act.scalar() = 1.0;
  return BayesAct{std::move(act), side, std::move(result.report)};
}

BayesAct bayes_act(const EmpiricalMeasure& mu, Side side, std::size_t depth, const DescentConfig& cfg,
                   const SquaredNormLoss& loss, const std::optional<TruncatedTensor>& initial_act) {
  const SignatureMeasure sm = SignatureMeasure::of(mu, depth);
  return bayes_act(sm, side, cfg, loss, initial_act);
}

Estimate score(const PiecewiseLinearPath& x, const EmpiricalMeasure& mu, Side side, std::size_t depth,
               const DescentConfig& cfg, const SquaredNormLoss& loss) {
  return expected_score(EmpiricalMeasure({x}), mu, side, depth, cfg, loss);
}

Estimate expected_score(const EmpiricalMeasure& nu, const EmpiricalMeasure& mu, Side side, std::size_t depth,
                        const DescentConfig& cfg, const SquaredNormLoss& loss) {
  if (nu.dimension() != mu.dimension()) throw DimensionMismatch("measures of different dimension");
  const BayesAct a = bayes_act(mu, side, depth, cfg, loss);
  Estimate e;
  absorb(e, a.diagnostics);
  e.value = expected_loss(SignatureMeasure::of(nu, depth), side, a.value, loss);
  return e;
}

Estimate entropy(const SignatureMeasure& mu, Side side, const DescentConfig& cfg, const SquaredNormLoss& loss) {
  const BayesAct a = bayes_act(mu, side, cfg, loss);
  Estimate e;
  absorb(e, a.diagnostics);
  e.value = expected_loss(mu, side, a.value, loss);
  return e;
}

Estimate entropy(const EmpiricalMeasure& mu, Side side, std::size_t depth, const DescentConfig& cfg,
                 const SquaredNormLoss& loss) {
  return entropy(SignatureMeasure::of(mu, depth), side, cfg, loss);
}

Estimate divergence(const EmpiricalMeasure& nu, const EmpiricalMeasure& mu, Side side, std::size_t depth,
                    const DescentConfig& cfg, const SquaredNormLoss& loss) {
  if (nu.dimension() != mu.dimension()) throw DimensionMismatch("measures of different dimension");
  const SignatureMeasure snu = SignatureMeasure::of(nu, depth);
  const SignatureMeasure smu = SignatureMeasure::of(mu, depth);
  const BayesAct a_mu = bayes_act(smu, side, cfg, loss);
  const BayesAct a_nu = bayes_act(snu, side, cfg, loss);
  Estimate e;
  absorb(e, a_mu.diagnostics);
  absorb(e, a_nu.diagnostics);
  const TruncatedTensor inv_mu = inverse(a_mu.value);
  const TruncatedTensor inv_nu = inverse(a_nu.value);
  double acc = 0.0;
  for (std::size_t i = 0; i < snu.signatures.size(); ++i) {
    const auto& s = snu.signatures[i];
    acc += snu.weights[i] * (loss_with_inverse(side, s, inv_mu, loss) - loss_with_inverse(side, s, inv_nu, loss));
  }
  e.value = acc;
  return e;
}

double point_divergence(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y, std::size_t depth,
                        const SquaredNormLoss& loss) {
  if (x.dimension() != y.dimension()) throw DimensionMismatch("paths of different dimension");
  return loss(mul(signature(x, depth), inverse(signature(y, depth))));
}

TruncatedTensor expected_signature(const SignatureMeasure& mu) {
  if (mu.signatures.empty()) throw DomainError("empty measure");
  TruncatedTensor out(mu.width(), mu.depth());
  for (std::size_t i = 0; i < mu.signatures.size(); ++i) {
    require_same_shape(out, mu.signatures[i]);
    auto dst = out.coefficients();
    auto src = mu.signatures[i].coefficients();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += mu.weights[i] * src[k];
  }
  return out;
}

TruncatedTensor expected_signature(const EmpiricalMeasure& mu, std::size_t depth) {
  return expected_signature(SignatureMeasure::of(mu, depth));
}

double linear_divergence(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, std::size_t depth) {
  if (mu.dimension() != nu.dimension()) throw DimensionMismatch("measures of different dimension");
  const TruncatedTensor diff = sub(expected_signature(mu, depth), expected_signature(nu, depth));
  return inner(diff, diff);
}

MutualInformationEstimate mutual_information(const ConditionalModel& model, std::size_t n_u, std::size_t n_x,
                                             Side side, std::size_t depth, const DescentConfig& cfg,
                                             std::uint64_t seed, const SquaredNormLoss& loss) {
  if (n_u < 2 || n_x < 2) throw DomainError("mutual information needs n_u >= 2 and n_x >= 2");
  MutualInformationEstimate out;
  out.n_u = n_u;
  out.n_x = n_x;
  out.seed = seed;
  Estimate diag;

  double sum_h = 0.0;
  double sum_h_cond = 0.0;
  for (std::size_t k = 0; k < n_u; ++k) {
    Rng cond_rng(derive_seed(seed, 2 * k));
    const ConditionalModel::Sampler sampler = model.condition(cond_rng);
    std::vector<PiecewiseLinearPath> conditional;
    conditional.reserve(n_x);
    for (std::size_t j = 0; j < n_x; ++j) conditional.push_back(sampler(cond_rng));

    Rng marg_rng(derive_seed(seed, 2 * k + 1));
    std::vector<PiecewiseLinearPath> marginal;
    marginal.reserve(n_x);
    for (std::size_t j = 0; j < n_x; ++j) {
      const ConditionalModel::Sampler s = model.condition(marg_rng);
      marginal.push_back(s(marg_rng));
    }

    const Estimate hc = entropy(EmpiricalMeasure(std::move(conditional)), side, depth, cfg, loss);
    const Estimate hm = entropy(EmpiricalMeasure(std::move(marginal)), side, depth, cfg, loss);
    sum_h_cond += hc.value;
    sum_h += hm.value;
    diag.iterations += hc.iterations + hm.iterations;
    diag.grad_norm = std::max({diag.grad_norm, hc.grad_norm, hm.grad_norm});
    diag.converged = diag.converged && hc.converged && hm.converged;
  }
  out.entropy = sum_h / static_cast<double>(n_u);
  out.conditional_entropy = sum_h_cond / static_cast<double>(n_u);
  out.mi = out.entropy - out.conditional_entropy;
  out.iterations = diag.iterations;
  out.grad_norm = diag.grad_norm;
  out.converged = diag.converged;
  return out;
}

void write_result_header(std::ostream& os) {
  os << "quantity,side,depth,value,n_samples,seed,iterations,grad_norm\n";
}

void write_result_row(std::ostream& os, const ResultRecord& r) {
  os << r.quantity << ',' << to_string(r.side) << ',' << r.depth << ',' << format_double(r.value) << ','
     << r.n_samples << ',';
  if (r.seed) os << *r.seed;
  os << ',' << r.iterations << ',' << format_double(r.grad_norm) << '\n';
}

}  // namespace trackscore

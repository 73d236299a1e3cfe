#include <cmath>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "trackscore/errors.hpp"
#include "trackscore/optimize.hpp"
#include "trackscore/scoring.hpp"

using namespace trackscore;
using trackscore::testing::random_tensor;
using trackscore::testing::random_unital;
using trackscore::testing::random_vector;

namespace {

AffineObjective bowl(const TruncatedTensor& target) {
  return AffineObjective{
      [target](const TruncatedTensor& x) {
        const auto d = sub(x, target);
        return inner(d, d);
      },
      [target](const TruncatedTensor& x) { return scale(2.0, sub(x, target)); },
  };
}

// f(g) = ||g - t||^2 on the group, with its ambient gradient.
GroupObjective distance_to(const TruncatedTensor& t) {
  return GroupObjective{
      [t](const TruncatedTensor& g) {
        const auto d = sub(g, t);
        return inner(d, d);
      },
      [t](const TruncatedTensor& g) { return scale(2.0, sub(g, t)); },
  };
}

GroupObjective loss_objective() {
  return GroupObjective{[](const TruncatedTensor& g) { return loss_L(g); },
                        [](const TruncatedTensor& g) { return SquaredNormLoss{}.gradient(g); }};
}

bool monotone(const std::vector<TraceRow>& trace) {
  for (std::size_t k = 1; k < trace.size(); ++k) {
    if (trace[k].objective > trace[k - 1].objective) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("descent configuration validation") {
  DescentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.step = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = DescentConfig{};
  cfg.grad_tol = -1;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = DescentConfig{};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("affine descent on a quadratic bowl") {
  Rng rng(41);
  for (DescentMethod method : {DescentMethod::gradient, DescentMethod::conjugate_gradient}) {
    const auto target = random_unital(rng, 2, 3, 1.0);
    DescentConfig cfg;
    cfg.method = method;
    cfg.record_trace = true;
    const auto res = affine_descent(bowl(target), unit(2, 3), cfg);
    CHECK(res.report.converged);
    CHECK(norm(sub(res.minimizer, target)) <= 1e-8);
    CHECK(res.minimizer.scalar() == 1.0);
    CHECK(monotone(res.report.trace));
    CHECK(res.report.trace.size() == res.report.iterations + 1);
  }
  const auto target = random_unital(rng, 2, 3, 1.0);
  TruncatedTensor off = unit(2, 3);
  off.scalar() = 0.5;
  CHECK_THROWS_AS(affine_descent(bowl(target), off, DescentConfig{}), DomainError);
}

TEST_CASE("affine descent reports an exhausted budget") {
  Rng rng(43);
  const auto target = random_unital(rng, 3, 3, 1.0);
  DescentConfig cfg;
  cfg.method = DescentMethod::gradient;
  cfg.step = 1e-3;
  cfg.max_iters = 3;
  const auto res = affine_descent(bowl(target), unit(3, 3), cfg);
  CHECK_FALSE(res.report.converged);
  CHECK(res.report.iterations == 3);
}

TEST_CASE("an oversized step is halved until the objective decreases") {
  Rng rng(47);
  const auto target = random_unital(rng, 2, 2, 1.0);
  DescentConfig cfg;
  cfg.method = DescentMethod::gradient;
  cfg.step = 50.0;
  cfg.record_trace = true;
  const auto res = affine_descent(bowl(target), unit(2, 2), cfg);
  CHECK(res.report.halvings > 0);
  CHECK(res.report.converged);
  CHECK(monotone(res.report.trace));
}

TEST_CASE("trace export") {
  std::ostringstream os;
  const std::vector<TraceRow> rows{{0, 2.0, 1.0, 0.0}, {1, 0.5, 0.25, 0.5}};
  write_trace_csv(os, rows);
  CHECK(os.str() == "iter,objective,grad_norm,step\n0,2,1,0\n1,0.5,0.25,0.5\n");
}

TEST_CASE("Pansu gradient") {
  SUBCASE("vanishes at the minimum of the loss") {
    const auto g = pansu_gradient(loss_objective(), unit(2, 2));
    CHECK(g == std::vector<double>{0.0, 0.0});
  }
  SUBCASE("analytic directional derivative matches finite differences") {
    Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
      const auto t = random_tensor(rng, 2, 4, 1.0, 1.0);
      const auto g = exp_of_vector(random_vector(rng, 2), 4);
      const auto f = distance_to(t);
      const auto analytic = pansu_gradient(f, g);
      for (double h : {1e-3, 1e-4}) {
        const auto fd = pansu_gradient_fd(f.value, g, h);
        double diff = 0.0;
        double ref = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
          diff += (fd[i] - analytic[i]) * (fd[i] - analytic[i]);
          ref += analytic[i] * analytic[i];
        }
        CHECK(std::sqrt(diff / ref) <= 1e-5);
      }
    }
  }
  SUBCASE("linear in the objective") {
    Rng rng(59);
    const auto t1 = random_tensor(rng, 3, 3, 1.0, 1.0);
    const auto t2 = random_tensor(rng, 3, 3, 1.0, 1.0);
    const auto g = exp_of_vector(random_vector(rng, 3), 3);
    const auto f1 = distance_to(t1);
    const auto f2 = distance_to(t2);
    const GroupObjective combo{
        [&](const TruncatedTensor& x) { return 2.0 * f1.value(x) - 0.5 * f2.value(x); },
        [&](const TruncatedTensor& x) {
          return add(scale(2.0, f1.euclidean_gradient(x)), scale(-0.5, f2.euclidean_gradient(x)));
        }};
    const auto a = pansu_gradient(f1, g);
    const auto b = pansu_gradient(f2, g);
    const auto c = pansu_gradient(combo, g);
    for (std::size_t i = 0; i < 3; ++i) CHECK(c[i] == doctest::Approx(2.0 * a[i] - 0.5 * b[i]).epsilon(1e-12));
  }
  SUBCASE("falls back to finite differences without a gradient") {
    Rng rng(61);
    const auto t = random_tensor(rng, 2, 3, 1.0, 1.0);
    const auto g = exp_of_vector(random_vector(rng, 2), 3);
    const GroupObjective no_grad{distance_to(t).value, {}};
    const auto a = pansu_gradient(distance_to(t), g);
    const auto b = pansu_gradient(no_grad, g);
    for (std::size_t i = 0; i < 2; ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-6));
  }
}

TEST_CASE("Pansu descent reaches a single-exponential target") {
  Rng rng(67);
  for (int trial = 0; trial < 5; ++trial) {
    const auto v = random_vector(rng, 2, 0.7);
    const auto target = exp_of_vector(v, 3);
    DescentConfig cfg;
    cfg.record_trace = true;
    cfg.max_iters = 5000;
    std::size_t checked = 0;
    const auto f = distance_to(target);
    const auto res = pansu_descent(f, unit(2, 3), cfg);
    CHECK(res.report.objective <= 1e-6);
    CHECK(is_grouplike(res.minimizer));
    const auto& trace = res.report.trace;
    for (std::size_t k = 1; k < trace.size(); ++k) {
      CHECK(trace[k].objective < trace[k - 1].objective);
      ++checked;
    }
    CHECK(checked == res.report.iterations);
  }
}

TEST_CASE("Pansu iterates stay group-like") {
  Rng rng(71);
  const auto t = random_tensor(rng, 2, 4, 0.5, 1.0);
  DescentConfig cfg;
  cfg.max_iters = 1;
  TruncatedTensor g = unit(2, 4);
  for (int k = 0; k < 20; ++k) {
    g = pansu_descent(distance_to(t), g, cfg).minimizer;
    CHECK(is_grouplike(g));
  }
  TruncatedTensor not_group = unit(2, 4);
  not_group.level(2)[0] = 3.0;
  CHECK_THROWS_AS(pansu_descent(distance_to(t), not_group, cfg), DomainError);
}

TEST_CASE("Pansu descent stops immediately at a stationary start") {
  const auto res = pansu_descent(loss_objective(), unit(2, 2), DescentConfig{});
  CHECK(res.report.iterations == 0);
  CHECK(res.report.converged);
  CHECK(res.minimizer == unit(2, 2));
}

TEST_CASE("Taylor remainder check") {
  const std::vector<double> grid{1e-1, 1e-2, 1e-3, 1e-4};
  Rng rng(73);
  SUBCASE("quadratic objectives have second-order remainders") {
    for (int trial = 0; trial < 10; ++trial) {
      const auto t = random_tensor(rng, 2, 4, 1.0, 1.0);
      const auto g = exp_of_vector(random_vector(rng, 2), 4);
      auto v = random_vector(rng, 2);
      const double n = std::hypot(v[0], v[1]);
      for (double& c : v) c /= n;
      const auto rep = taylor_check(distance_to(t), g, exp_of_vector(v, 4), grid);
      CHECK(rep.remainders.size() == 4);
      CHECK_FALSE(rep.degenerate);
      CHECK(rep.slope >= 1.9);
    }
  }
  SUBCASE("functionals of levels zero and one are exactly linear along exponentials") {
    const GroupObjective linear{
        [](const TruncatedTensor& g) { return 0.3 * g.scalar() + 2.0 * g.level(1)[0] - g.level(1)[1]; },
        [](const TruncatedTensor& g) {
          TruncatedTensor c(g.width(), g.depth());
          c.scalar() = 0.3;
          c.level(1)[0] = 2.0;
          c.level(1)[1] = -1.0;
          return c;
        }};
    const auto g = exp_of_vector(random_vector(rng, 2), 3);
    const auto rep = taylor_check(linear, g, exp_of_vector(std::vector<double>{0.6, 0.8}, 3), grid);
    CHECK(rep.degenerate);
    for (double r : rep.remainders) CHECK(r <= 1e-13);
  }
  SUBCASE("preconditions") {
    const auto g = unit(2, 2);
    const auto h = exp_of_vector(std::vector<double>{1, 0}, 2);
    const std::vector<double> short_grid{1e-1, 1e-2};
    CHECK_THROWS_AS(taylor_check(loss_objective(), g, h, short_grid), DomainError);
    TruncatedTensor not_exp = h;
    not_exp.level(2)[1] = 1.0;
    CHECK_THROWS_AS(taylor_check(loss_objective(), g, not_exp, grid), DomainError);
  }
}

TEST_CASE("geometric convexity diagnostic") {
  Rng rng(79);
  std::vector<TruncatedTensor> gs;
  std::vector<TruncatedTensor> hs;
  for (int k = 0; k < 10; ++k) {
    gs.push_back(exp_of_vector(random_vector(rng, 2), 3));
    hs.push_back(mul(exp_of_vector(random_vector(rng, 2), 3), exp_of_vector(random_vector(rng, 2), 3)));
  }
  const std::vector<double> lambdas{0.0, 0.25, 0.5, 0.75, 1.0};
  const auto f = [](const TruncatedTensor& g) {
    const auto d = sub(g, unit(g.width(), g.depth()));
    return inner(d, d);
  };
  const auto rep = geometric_convexity_check(f, gs, hs, lambdas);
  CHECK(rep.samples == 50);
  CHECK(rep.violations <= rep.samples);
  // The endpoints lambda = 0 and 1 reproduce f(g) and f(h) exactly.
  CHECK(rep.worst_excess >= -1e-12);
  std::vector<TruncatedTensor> one{unit(2, 3)};
  CHECK_THROWS_AS(geometric_convexity_check(f, gs, one, lambdas), DimensionMismatch);
}

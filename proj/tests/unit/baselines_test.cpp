#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "trackscore/baselines.hpp"
#include "trackscore/errors.hpp"

using namespace trackscore;

namespace {

PiecewiseLinearPath random_sequence(Rng& rng, std::size_t n, std::size_t d = 2) {
  return trackscore::testing::random_path(rng, d, n - 1, 0.5);
}

PiecewiseLinearPath duplicate_point(const PiecewiseLinearPath& x, std::size_t i) {
  std::vector<double> coords(x.coordinates().begin(), x.coordinates().end());
  auto p = x.point(i);
  coords.insert(coords.begin() + static_cast<std::ptrdiff_t>(i * x.dimension()), p.begin(), p.end());
  return PiecewiseLinearPath(x.dimension(), std::move(coords));
}

// Exhaustive minimum over monotone alignments, for tiny inputs.
double brute_force_dtw(const CostMatrix& c, std::size_t i, std::size_t j) {
  if (i == 0 && j == 0) return c(0, 0);
  double best = INFINITY;
  if (i > 0) best = std::min(best, brute_force_dtw(c, i - 1, j));
  if (j > 0) best = std::min(best, brute_force_dtw(c, i, j - 1));
  if (i > 0 && j > 0) best = std::min(best, brute_force_dtw(c, i - 1, j - 1));
  return c(i, j) + best;
}

}  // namespace

TEST_CASE("cost matrix") {
  const auto x = from_points({{0, 0}, {1, 1}});
  const auto y = from_points({{0, 1}, {2, 0}, {1, 1}});
  const auto c = cost_matrix(x, y);
  CHECK(c.rows == 2);
  CHECK(c.cols == 3);
  CHECK(c(0, 1) == 4.0);
  CHECK(c(1, 2) == 0.0);
  CHECK_THROWS_AS(cost_matrix(x, from_points({{0}})), DimensionMismatch);
}

TEST_CASE("dtw") {
  Rng rng(83);
  const auto x = random_sequence(rng, 12);
  CHECK(dtw(x, x) == 0.0);
  CHECK(dtw(from_points({{0}, {1}}), from_points({{0}, {1}, {1}})) == 0.0);
  CHECK(dtw(from_points({{0}}), from_points({{3}})) == 9.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_sequence(rng, 2 + trial % 5);
    const auto b = random_sequence(rng, 2 + (trial * 3) % 6);
    const double d = dtw(a, b);
    CHECK(d >= 0.0);
    CHECK(d == doctest::Approx(brute_force_dtw(cost_matrix(a, b), a.size() - 1, b.size() - 1)).epsilon(1e-14));
    // A repeated breakpoint is absorbed by matching both copies to the original.
    CHECK(dtw(a, duplicate_point(a, trial % a.size())) == 0.0);
    CHECK(dtw(duplicate_point(b, 0), duplicate_point(b, b.size() - 1)) == 0.0);
  }
}

TEST_CASE("soft dtw") {
  CHECK(soft_dtw(from_points({{0}}), from_points({{3}}), 1.0) == 9.0);
  CHECK(soft_dtw(from_points({{0}}), from_points({{3}}), 0.01) == 9.0);
  CHECK_THROWS_AS(soft_dtw(from_points({{0}}), from_points({{3}}), 0.0), DomainError);
  CHECK_THROWS_AS(soft_dtw(from_points({{0}}), from_points({{3}}), -1.0), DomainError);

  Rng rng(89);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_sequence(rng, 20);
    const auto y = random_sequence(rng, 20);
    const double hard = dtw(x, y);
    const double s1 = soft_dtw(x, y, 1.0);
    const double s01 = soft_dtw(x, y, 0.1);
    const double s001 = soft_dtw(x, y, 0.01);
    CHECK(std::abs(s001 - hard) <= 0.1);
    // The soft minimum lies below the hard one and rises towards it as gamma shrinks.
    CHECK(s1 <= s01);
    CHECK(s01 <= s001);
    CHECK(s001 <= hard);
    CHECK(std::abs(s001 - hard) <= std::abs(s01 - hard));
  }
  // Self-comparison falls below zero once many alignments are near-optimal.
  const auto x = random_sequence(rng, 20);
  CHECK(soft_dtw(x, x, 1.0) < 0.0);
}

TEST_CASE("soft dtw divergence") {
  Rng rng(97);
  const auto x = random_sequence(rng, 15);
  const auto y = random_sequence(rng, 15);
  CHECK(soft_dtw_divergence(x, x, 1.0) == 0.0);
  CHECK(soft_dtw_divergence(x, y, 1.0) >= 0.0);
  CHECK(soft_dtw_divergence(x, y, 1e-3) == doctest::Approx(dtw(x, y)).epsilon(1e-2));
  CHECK(soft_dtw_divergence(x, y, 0.5) == doctest::Approx(soft_dtw_divergence(y, x, 0.5)).epsilon(1e-12));
}

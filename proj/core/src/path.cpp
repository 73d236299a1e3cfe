#include "trackscore/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trackscore/errors.hpp"

namespace trackscore {

namespace {

void require_increasing(std::span<const double> times) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw DomainError("timestamps must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
}

}  // namespace

PiecewiseLinearPath::PiecewiseLinearPath(std::size_t dimension, std::vector<double> coords,
                                         std::optional<std::vector<double>> times)
    : dimension_(dimension), coords_(std::move(coords)), times_(std::move(times)) {
  if (dimension_ == 0) throw DimensionMismatch("path dimension must be positive");
  if (coords_.empty() || coords_.size() % dimension_ != 0) {
    throw DimensionMismatch("path needs at least one breakpoint of dimension " + std::to_string(dimension_));
  }
  if (times_) {
    if (times_->size() != size()) {
      throw DimensionMismatch("got " + std::to_string(times_->size()) + " timestamps for " +
                              std::to_string(size()) + " breakpoints");
    }
    require_increasing(*times_);
  }
}

std::vector<double> PiecewiseLinearPath::increment(std::size_t i) const {
  auto a = point(i);
  auto b = point(i + 1);
  std::vector<double> v(dimension_);
  for (std::size_t k = 0; k < dimension_; ++k) v[k] = b[k] - a[k];
  return v;
}

PiecewiseLinearPath from_time_series(std::span<const TimedPoint> rows) {
  if (rows.empty()) throw DomainError("time series has no rows");
  const std::size_t d = rows.front().x.size();
  std::vector<double> coords;
  std::vector<double> times;
  coords.reserve(rows.size() * d);
  times.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].x.size() != d) {
      throw DimensionMismatch("row " + std::to_string(i) + " has dimension " +
                              std::to_string(rows[i].x.size()) + ", expected " + std::to_string(d));
    }
    coords.insert(coords.end(), rows[i].x.begin(), rows[i].x.end());
    times.push_back(rows[i].t);
  }
  return PiecewiseLinearPath(d, std::move(coords), std::move(times));
}

PiecewiseLinearPath from_points(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw DomainError("path has no points");
  const std::size_t d = points.front().size();
  std::vector<double> coords;
  coords.reserve(points.size() * d);
  for (const auto& p : points) {
    if (p.size() != d) throw DimensionMismatch("ragged point list");
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return PiecewiseLinearPath(d, std::move(coords));
}

PiecewiseLinearPath concat(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y) {
  if (x.dimension() != y.dimension()) {
    throw DimensionMismatch("cannot concatenate paths of dimension " + std::to_string(x.dimension()) +
                            " and " + std::to_string(y.dimension()));
  }
  const std::size_t d = x.dimension();
  auto end = x.point(x.size() - 1);
  auto start = y.point(0);
  std::vector<double> coords(x.coordinates().begin(), x.coordinates().end());
  coords.reserve(coords.size() + (y.size() - 1) * d);
  for (std::size_t i = 1; i < y.size(); ++i) {
    auto p = y.point(i);
    for (std::size_t k = 0; k < d; ++k) coords.push_back(p[k] - start[k] + end[k]);
  }
  std::optional<std::vector<double>> times;
  if (x.has_times() && y.has_times()) {
    times = *x.times();
    const double shift = x.times()->back() - y.times()->front();
    for (std::size_t i = 1; i < y.size(); ++i) times->push_back((*y.times())[i] + shift);
  }
  return PiecewiseLinearPath(d, std::move(coords), std::move(times));
}

PiecewiseLinearPath reverse(const PiecewiseLinearPath& x) {
  const std::size_t d = x.dimension();
  std::vector<double> coords;
  coords.reserve(x.coordinates().size());
  for (std::size_t i = x.size(); i-- > 0;) {
    auto p = x.point(i);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  std::optional<std::vector<double>> times;
  if (x.has_times()) {
    const auto& src = *x.times();
    const double a = src.front() + src.back();
    times.emplace();
    for (std::size_t i = src.size(); i-- > 0;) times->push_back(a - src[i]);
  }
  return PiecewiseLinearPath(d, std::move(coords), std::move(times));
}

TimeAugmented time_augment(const PiecewiseLinearPath& x) {
  const std::size_t d = x.dimension();
  std::vector<double> times;
  const bool synthesized = !x.has_times();
  if (synthesized) {
    times.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) times[i] = static_cast<double>(i);
  } else {
    times = *x.times();
  }
  std::vector<double> coords;
  coords.reserve(x.size() * (d + 1));
  for (std::size_t i = 0; i < x.size(); ++i) {
    coords.push_back(times[i]);
    auto p = x.point(i);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return {PiecewiseLinearPath(d + 1, std::move(coords), std::move(times)), synthesized};
}

PiecewiseLinearPath translate(const PiecewiseLinearPath& x, std::span<const double> offset) {
  if (offset.size() != x.dimension()) throw DimensionMismatch("translation has wrong dimension");
  std::vector<double> coords(x.coordinates().begin(), x.coordinates().end());
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += offset[i % x.dimension()];
  return PiecewiseLinearPath(x.dimension(), std::move(coords), x.times());
}

PiecewiseLinearPath scale_path(double lambda, const PiecewiseLinearPath& x) {
  std::vector<double> coords(x.coordinates().begin(), x.coordinates().end());
  for (double& c : coords) c *= lambda;
  return PiecewiseLinearPath(x.dimension(), std::move(coords), x.times());
}

PiecewiseLinearPath refine_segment(const PiecewiseLinearPath& x, std::size_t i) {
  if (i >= x.segments()) throw std::out_of_range("segment index out of range");
  const std::size_t d = x.dimension();
  std::vector<double> coords(x.coordinates().begin(), x.coordinates().end());
  auto a = x.point(i);
  auto b = x.point(i + 1);
  std::vector<double> mid(d);
  for (std::size_t k = 0; k < d; ++k) mid[k] = 0.5 * (a[k] + b[k]);
  coords.insert(coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * d), mid.begin(), mid.end());
  std::optional<std::vector<double>> times;
  if (x.has_times()) {
    times = *x.times();
    const double tm = 0.5 * ((*times)[i] + (*times)[i + 1]);
    times->insert(times->begin() + static_cast<std::ptrdiff_t>(i + 1), tm);
  }
  return PiecewiseLinearPath(d, std::move(coords), std::move(times));
}

double total_variation(const PiecewiseLinearPath& x) {
  double v = 0.0;
  for (std::size_t i = 0; i < x.segments(); ++i) {
    auto a = x.point(i);
    auto b = x.point(i + 1);
    double sq = 0.0;
    for (std::size_t k = 0; k < x.dimension(); ++k) sq += (b[k] - a[k]) * (b[k] - a[k]);
    v += std::sqrt(sq);
  }
  return v;
}

std::vector<double> evaluate_at(const PiecewiseLinearPath& x, double t) {
  if (!x.has_times()) throw DomainError("evaluate_at requires timestamps");
  const auto& times = *x.times();
  const std::size_t d = x.dimension();
  if (t <= times.front()) {
    auto p = x.point(0);
    return {p.begin(), p.end()};
  }
  if (t >= times.back()) {
    auto p = x.point(x.size() - 1);
    return {p.begin(), p.end()};
  }
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  auto a = x.point(lo);
  auto b = x.point(hi);
  std::vector<double> out(d);
  for (std::size_t k = 0; k < d; ++k) out[k] = a[k] + w * (b[k] - a[k]);
  return out;
}

}  // namespace trackscore

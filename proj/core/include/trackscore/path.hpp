#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace trackscore {

/// One observation of a time series.
struct TimedPoint {
  double t;
  std::vector<double> x;
};

/// Continuous path obtained by linear interpolation between breakpoints.
///
/// Breakpoints are stored row-major in a flat array. Timestamps are optional;
/// when present they are strictly increasing and one per breakpoint. The
/// path stands in for its track, so only the increment sequence matters to
/// the signature.
class PiecewiseLinearPath {
 public:
  PiecewiseLinearPath(std::size_t dimension, std::vector<double> coords,
                      std::optional<std::vector<double>> times = std::nullopt);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return coords_.size() / dimension_; }
  std::size_t segments() const noexcept { return size() - 1; }

  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(coords_).subspan(i * dimension_, dimension_);
  }
  std::span<const double> coordinates() const noexcept { return coords_; }

  bool has_times() const noexcept { return times_.has_value(); }
  const std::optional<std::vector<double>>& times() const noexcept { return times_; }

  /// Increment of segment i (point(i + 1) - point(i)).
  std::vector<double> increment(std::size_t i) const;

  friend bool operator==(const PiecewiseLinearPath&, const PiecewiseLinearPath&) = default;

 private:
  std::size_t dimension_;
  std::vector<double> coords_;
  std::optional<std::vector<double>> times_;
};

/// Builds a path from rows of equal dimension with strictly increasing times.
PiecewiseLinearPath from_time_series(std::span<const TimedPoint> rows);

/// Untimed path from a list of points.
PiecewiseLinearPath from_points(const std::vector<std::vector<double>>& points);

/// x followed by y, with y translated so that it starts where x ends. Timestamps
/// survive only if both inputs carry them.
PiecewiseLinearPath concat(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y);

/// Same track run backwards.
PiecewiseLinearPath reverse(const PiecewiseLinearPath& x);

struct TimeAugmented {
  PiecewiseLinearPath path;
  bool synthesized_times;  ///< true if the input had no timestamps and 0, 1, ..., L were used
};

/// Prepends time as coordinate 0.
TimeAugmented time_augment(const PiecewiseLinearPath& x);

PiecewiseLinearPath translate(const PiecewiseLinearPath& x, std::span<const double> offset);

/// Scales every breakpoint (spatially) by lambda.
PiecewiseLinearPath scale_path(double lambda, const PiecewiseLinearPath& x);

/// Inserts the midpoint of segment i.
PiecewiseLinearPath refine_segment(const PiecewiseLinearPath& x, std::size_t i);

/// Sum of Euclidean segment lengths (the bounded-variation norm).
double total_variation(const PiecewiseLinearPath& x);

/// Linear interpolation of the path at time t (clamped to the time range).
/// Requires timestamps.
std::vector<double> evaluate_at(const PiecewiseLinearPath& x, double t);

}  // namespace trackscore

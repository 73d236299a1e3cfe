#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trackscore/path.hpp"

namespace trackscore {

struct NamedSeries {
  std::string id;
  PiecewiseLinearPath path;
};

/// Long-format CSV: header `series_id,t,x1,...,xd` (the `t` column is optional).
/// Rows are grouped by series_id in order of first appearance; within a group,
/// `t` must be strictly increasing in file order. Throws ParseError carrying
/// the offending line number.
std::vector<NamedSeries> read_series_csv(std::istream& is);

/// Writes the same format. Timestamps are emitted only if every series has them.
void write_series_csv(std::ostream& os, const std::vector<NamedSeries>& series);

}  // namespace trackscore

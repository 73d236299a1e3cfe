#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "trackscore/path.hpp"
#include "trackscore/tensor.hpp"

namespace trackscore {

/// Truncated signature of a piecewise-linear path: exp(v_1) exp(v_2) ... exp(v_L)
/// over the segment increments, accumulated left to right in O(L d^M).
/// A single-point path maps to the unit.
TruncatedTensor signature(const PiecewiseLinearPath& x, std::size_t depth);

/// Signatures of many paths (all of the same dimension).
std::vector<TruncatedTensor> signatures(std::span<const PiecewiseLinearPath> paths, std::size_t depth);

}  // namespace trackscore

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trackscore/tensor.hpp"

namespace trackscore {

// Text record layout:
//   width,depth
//   <level 0>
//   <level 1 coefficients, comma separated>
//   ...
//   <level depth>
// Every number is written with 17 significant digits, so a write/read cycle
// reproduces the tensor bit for bit. Records may be concatenated in one stream.

/// Shortest "%.17g"-style representation of x.
std::string format_double(double x);

void write_tensor(std::ostream& os, const TruncatedTensor& t);

/// Reads one record. Returns nullopt at a clean end of stream; throws
/// ParseError on malformed input. `line` tracks the 1-based line counter
/// across consecutive calls.
std::optional<TruncatedTensor> read_tensor(std::istream& is, std::size_t& line);

/// Reads every record in the stream.
std::vector<TruncatedTensor> read_tensors(std::istream& is);

}  // namespace trackscore

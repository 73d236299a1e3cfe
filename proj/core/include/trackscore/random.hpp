#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace trackscore {

/// SplitMix64 finaliser (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of an independent sub-stream, e.g. per draw or per grid point. Results
/// computed from derived streams do not depend on evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Reproducible random source.
///
/// The engine is std::mt19937_64 (its output sequence is fixed by the C++
/// standard) seeded with splitmix64(seed). Uniforms take the top 53 bits of a
/// 64-bit draw; normals use the Box-Muller transform, returning the cosine
/// variate first and caching the sine variate. Nothing here depends on
/// implementation-defined std:: distributions, so streams are identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [a, b).
  double uniform(double a, double b);
  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace trackscore

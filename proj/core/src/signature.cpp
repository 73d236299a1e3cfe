#include "trackscore/signature.hpp"

#include "trackscore/errors.hpp"

namespace trackscore {

TruncatedTensor signature(const PiecewiseLinearPath& x, std::size_t depth) {
  const std::size_t d = x.dimension();
  TruncatedTensor sig = unit(d, depth);
  std::vector<double> v(d);
  for (std::size_t i = 0; i < x.segments(); ++i) {
    auto a = x.point(i);
    auto b = x.point(i + 1);
    for (std::size_t k = 0; k < d; ++k) v[k] = b[k] - a[k];
    mul_exp_inplace(sig, v);
  }
  return sig;
}

std::vector<TruncatedTensor> signatures(std::span<const PiecewiseLinearPath> paths, std::size_t depth) {
  std::vector<TruncatedTensor> out;
  out.reserve(paths.size());
  for (const auto& p : paths) {
    if (!out.empty() && p.dimension() != out.front().width()) {
      throw DimensionMismatch("paths of mixed dimension");
    }
    out.push_back(signature(p, depth));
  }
  return out;
}

}  // namespace trackscore

#include "trackscore/tensor.hpp"

#include <cmath>
#include <string>

#include "trackscore/errors.hpp"

namespace trackscore {

namespace {

constexpr double kInvertibilityTol = 1e-12;
constexpr double kGrouplikeTol = 1e-9;

std::string shape_string(const TruncatedTensor& t) {
  return "(width " + std::to_string(t.width()) + ", depth " + std::to_string(t.depth()) + ")";
}

// Reverses the base-`width` digits of a multi-index of length m.
std::size_t reverse_index(std::size_t index, std::size_t width, std::size_t m) {
  std::size_t out = 0;
  for (std::size_t k = 0; k < m; ++k) {
    out = out * width + index % width;
    index /= width;
  }
  return out;
}

}  // namespace

std::size_t level_size(std::size_t width, std::size_t m) {
  std::size_t n = 1;
  for (std::size_t k = 0; k < m; ++k) n *= width;
  return n;
}

std::size_t total_size(std::size_t width, std::size_t depth) {
  std::size_t n = 0;
  std::size_t p = 1;
  for (std::size_t m = 0; m <= depth; ++m) {
    n += p;
    p *= width;
  }
  return n;
}

TruncatedTensor::TruncatedTensor(std::size_t width, std::size_t depth)
    : width_(width), depth_(depth) {
  if (width == 0) throw DimensionMismatch("tensor width must be positive");
  coeffs_.assign(total_size(width, depth), 0.0);
}

TruncatedTensor::TruncatedTensor(std::size_t width, std::size_t depth, std::vector<double> coeffs)
    : width_(width), depth_(depth), coeffs_(std::move(coeffs)) {
  if (width == 0) throw DimensionMismatch("tensor width must be positive");
  if (coeffs_.size() != total_size(width, depth)) {
    throw DimensionMismatch("expected " + std::to_string(total_size(width, depth)) +
                            " coefficients, got " + std::to_string(coeffs_.size()));
  }
}

std::size_t TruncatedTensor::level_offset(std::size_t m) const {
  std::size_t off = 0;
  std::size_t p = 1;
  for (std::size_t k = 0; k < m; ++k) {
    off += p;
    p *= width_;
  }
  return off;
}

std::span<double> TruncatedTensor::level(std::size_t m) {
  if (m > depth_) throw std::out_of_range("level " + std::to_string(m) + " beyond depth");
  return std::span<double>(coeffs_).subspan(level_offset(m), level_size(width_, m));
}

std::span<const double> TruncatedTensor::level(std::size_t m) const {
  if (m > depth_) throw std::out_of_range("level " + std::to_string(m) + " beyond depth");
  return std::span<const double>(coeffs_).subspan(level_offset(m), level_size(width_, m));
}

TruncatedTensor& TruncatedTensor::operator+=(const TruncatedTensor& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

TruncatedTensor& TruncatedTensor::operator-=(const TruncatedTensor& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

TruncatedTensor& TruncatedTensor::operator*=(double c) {
  for (double& x : coeffs_) x *= c;
  return *this;
}

void require_same_shape(const TruncatedTensor& a, const TruncatedTensor& b) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch("tensor shape mismatch: " + shape_string(a) + " vs " + shape_string(b));
  }
}

TruncatedTensor zero(std::size_t width, std::size_t depth) { return TruncatedTensor(width, depth); }

TruncatedTensor unit(std::size_t width, std::size_t depth) {
  TruncatedTensor t(width, depth);
  t.scalar() = 1.0;
  return t;
}

TruncatedTensor add(const TruncatedTensor& s, const TruncatedTensor& t) {
  TruncatedTensor out = s;
  out += t;
  return out;
}

TruncatedTensor sub(const TruncatedTensor& s, const TruncatedTensor& t) {
  TruncatedTensor out = s;
  out -= t;
  return out;
}

TruncatedTensor scale(double c, const TruncatedTensor& t) {
  TruncatedTensor out = t;
  out *= c;
  return out;
}

TruncatedTensor mul(const TruncatedTensor& s, const TruncatedTensor& t) {
  require_same_shape(s, t);
  const std::size_t d = s.width();
  const std::size_t depth = s.depth();
  TruncatedTensor out(d, depth);
  for (std::size_t m = 0; m <= depth; ++m) {
    auto dst = out.level(m);
    for (std::size_t k = 0; k <= m; ++k) {
      auto left = s.level(k);
      auto right = t.level(m - k);
      const std::size_t stride = right.size();
      for (std::size_t a = 0; a < left.size(); ++a) {
        const double sa = left[a];
        if (sa == 0.0) continue;
        double* row = dst.data() + a * stride;
        for (std::size_t b = 0; b < stride; ++b) row[b] += sa * right[b];
      }
    }
  }
  return out;
}

TruncatedTensor inverse(const TruncatedTensor& t) {
  const double t0 = t.scalar();
  if (!(std::abs(t0) > kInvertibilityTol)) {
    throw DomainError("tensor is not invertible: |level 0| = " + std::to_string(std::abs(t0)) +
                      " <= 1e-12");
  }
  // u = 1 - t / t0 has zero scalar part, so sum_{n<=M} u^n is exact at depth M.
  TruncatedTensor u = scale(-1.0 / t0, t);
  u.scalar() = 0.0;
  // Horner: r <- 1 + u r, applied M times.
  TruncatedTensor r = unit(t.width(), t.depth());
  for (std::size_t n = 0; n < t.depth(); ++n) {
    r = mul(u, r);
    r.scalar() += 1.0;
  }
  r *= 1.0 / t0;
  return r;
}

TruncatedTensor antipode(const TruncatedTensor& t) {
  TruncatedTensor out(t.width(), t.depth());
  for (std::size_t m = 0; m <= t.depth(); ++m) {
    auto src = t.level(m);
    auto dst = out.level(m);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[reverse_index(i, t.width(), m)] = sign * src[i];
    }
  }
  return out;
}

TruncatedTensor exp_of_vector(std::span<const double> v, std::size_t depth) {
  TruncatedTensor out = unit(v.size(), depth);
  for (std::size_t m = 1; m <= depth; ++m) {
    auto prev = out.level(m - 1);
    auto cur = out.level(m);
    const double inv_m = 1.0 / static_cast<double>(m);
    const std::size_t d = v.size();
    for (std::size_t a = 0; a < prev.size(); ++a) {
      for (std::size_t b = 0; b < d; ++b) cur[a * d + b] = prev[a] * v[b] * inv_m;
    }
  }
  return out;
}

TruncatedTensor dilate(double lambda, const TruncatedTensor& t) {
  TruncatedTensor out = t;
  double factor = 1.0;
  for (std::size_t m = 0; m <= t.depth(); ++m) {
    for (double& x : out.level(m)) x *= factor;
    factor *= lambda;
  }
  return out;
}

double inner(const TruncatedTensor& s, const TruncatedTensor& t) {
  require_same_shape(s, t);
  auto a = s.coefficients();
  auto b = t.coefficients();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(const TruncatedTensor& t) { return std::sqrt(inner(t, t)); }

TruncatedTensor lmul_adjoint(const TruncatedTensor& g, const TruncatedTensor& w) {
  require_same_shape(g, w);
  TruncatedTensor out(g.width(), g.depth());
  // out_j[b] = sum_{m >= j} sum_a g_{m-j}[a] w_m[a * d^j + b]
  for (std::size_t j = 0; j <= g.depth(); ++j) {
    auto dst = out.level(j);
    const std::size_t stride = dst.size();
    for (std::size_t m = j; m <= g.depth(); ++m) {
      auto gk = g.level(m - j);
      auto wm = w.level(m);
      for (std::size_t a = 0; a < gk.size(); ++a) {
        const double ga = gk[a];
        if (ga == 0.0) continue;
        const double* row = wm.data() + a * stride;
        for (std::size_t b = 0; b < stride; ++b) dst[b] += ga * row[b];
      }
    }
  }
  return out;
}

TruncatedTensor rmul_adjoint(const TruncatedTensor& g, const TruncatedTensor& w) {
  require_same_shape(g, w);
  TruncatedTensor out(g.width(), g.depth());
  // out_k[a] = sum_{m >= k} sum_b g_{m-k}[b] w_m[a * d^(m-k) + b]
  for (std::size_t k = 0; k <= g.depth(); ++k) {
    auto dst = out.level(k);
    for (std::size_t m = k; m <= g.depth(); ++m) {
      auto gj = g.level(m - k);
      auto wm = w.level(m);
      const std::size_t stride = gj.size();
      for (std::size_t a = 0; a < dst.size(); ++a) {
        const double* row = wm.data() + a * stride;
        double acc = 0.0;
        for (std::size_t b = 0; b < stride; ++b) acc += gj[b] * row[b];
        dst[a] += acc;
      }
    }
  }
  return out;
}

bool is_unital(const TruncatedTensor& t, double tol) { return std::abs(t.scalar() - 1.0) <= tol; }

bool is_grouplike(const TruncatedTensor& g) {
  TruncatedTensor residual = mul(antipode(g), g);
  residual.scalar() -= 1.0;
  return norm(residual) <= kGrouplikeTol * (1.0 + norm(g));
}

TruncatedTensor degree_one(std::span<const double> v, std::size_t depth) {
  TruncatedTensor out(v.size(), depth);
  if (depth >= 1) {
    auto l1 = out.level(1);
    for (std::size_t i = 0; i < v.size(); ++i) l1[i] = v[i];
  }
  return out;
}

void mul_exp_inplace(TruncatedTensor& s, std::span<const double> v) {
  if (v.size() != s.width()) {
    throw DimensionMismatch("increment dimension " + std::to_string(v.size()) +
                            " does not match tensor width " + std::to_string(s.width()));
  }
  const std::size_t depth = s.depth();
  if (depth == 0) return;
  const TruncatedTensor e = exp_of_vector(v, depth);
  // Highest level first: S_m += sum_{k>=1} S_{m-k} (x) E_k only reads lower levels,
  // which are still unmodified at that point.
  for (std::size_t m = depth; m >= 1; --m) {
    auto dst = s.level(m);
    for (std::size_t k = 1; k <= m; ++k) {
      auto left = s.level(m - k);
      auto right = e.level(k);
      const std::size_t stride = right.size();
      for (std::size_t a = 0; a < left.size(); ++a) {
        const double sa = left[a];
        if (sa == 0.0) continue;
        double* row = dst.data() + a * stride;
        for (std::size_t b = 0; b < stride; ++b) row[b] += sa * right[b];
      }
    }
  }
}

}  // namespace trackscore

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace trackscore {

/// Number of coefficients at tensor degree m over R^width, i.e. width^m.
std::size_t level_size(std::size_t width, std::size_t m);

/// Element of the free tensor algebra over R^width, truncated at a fixed depth.
///
/// Coefficients are stored densely, level by level. Level m holds width^m
/// numbers indexed by multi-indices (i_1, ..., i_m) in row-major lexicographic
/// order, so the flat index inside a level is i_1 * width^(m-1) + ... + i_m.
/// Level 0 is a single scalar.
class TruncatedTensor {
 public:
  /// The zero tensor. width must be >= 1.
  TruncatedTensor(std::size_t width, std::size_t depth);

  /// Takes ownership of a flat coefficient array (all levels concatenated).
  /// Throws DimensionMismatch if coeffs.size() is not the total size.
  TruncatedTensor(std::size_t width, std::size_t depth, std::vector<double> coeffs);

  std::size_t width() const noexcept { return width_; }
  std::size_t depth() const noexcept { return depth_; }

  std::span<double> level(std::size_t m);
  std::span<const double> level(std::size_t m) const;

  std::span<double> coefficients() noexcept { return coeffs_; }
  std::span<const double> coefficients() const noexcept { return coeffs_; }

  double scalar() const noexcept { return coeffs_[0]; }
  double& scalar() noexcept { return coeffs_[0]; }

  /// Offset of level m inside coefficients().
  std::size_t level_offset(std::size_t m) const;

  bool same_shape(const TruncatedTensor& other) const noexcept {
    return width_ == other.width_ && depth_ == other.depth_;
  }

  TruncatedTensor& operator+=(const TruncatedTensor& other);
  TruncatedTensor& operator-=(const TruncatedTensor& other);
  TruncatedTensor& operator*=(double c);

  friend bool operator==(const TruncatedTensor&, const TruncatedTensor&) = default;

 private:
  std::size_t width_;
  std::size_t depth_;
  std::vector<double> coeffs_;
};

/// Total number of coefficients of a tensor with levels 0..depth.
std::size_t total_size(std::size_t width, std::size_t depth);

/// Throws DimensionMismatch unless a and b share width and depth.
void require_same_shape(const TruncatedTensor& a, const TruncatedTensor& b);

TruncatedTensor zero(std::size_t width, std::size_t depth);
TruncatedTensor unit(std::size_t width, std::size_t depth);

TruncatedTensor add(const TruncatedTensor& s, const TruncatedTensor& t);
TruncatedTensor sub(const TruncatedTensor& s, const TruncatedTensor& t);
TruncatedTensor scale(double c, const TruncatedTensor& t);

/// Truncated tensor product: (s t)_m = sum_k s_k (x) t_{m-k}.
TruncatedTensor mul(const TruncatedTensor& s, const TruncatedTensor& t);

/// Multiplicative inverse via the geometric series in (1 - t / t_0), which
/// terminates at the truncation depth. Throws DomainError when |t_0| <= 1e-12.
TruncatedTensor inverse(const TruncatedTensor& t);

/// Linear involution sending the coefficient at (i_1..i_m) to (-1)^m times
/// the coefficient at (i_m..i_1).
TruncatedTensor antipode(const TruncatedTensor& t);

/// exp(v) = (1, v, v^2/2!, ..., v^M/M!). v.size() is the width.
TruncatedTensor exp_of_vector(std::span<const double> v, std::size_t depth);

/// Grading automorphism: level m is multiplied by lambda^m.
TruncatedTensor dilate(double lambda, const TruncatedTensor& t);

/// l2 inner product over all levels and multi-indices.
double inner(const TruncatedTensor& s, const TruncatedTensor& t);
double norm(const TruncatedTensor& t);

/// Adjoint of x -> g x with respect to inner():
/// inner(mul(g, x), w) == inner(x, lmul_adjoint(g, w)).
TruncatedTensor lmul_adjoint(const TruncatedTensor& g, const TruncatedTensor& w);

/// Adjoint of x -> x g: inner(mul(x, g), w) == inner(x, rmul_adjoint(g, w)).
TruncatedTensor rmul_adjoint(const TruncatedTensor& g, const TruncatedTensor& w);

/// Level 0 equals one within tol.
bool is_unital(const TruncatedTensor& t, double tol = 1e-12);

/// ||antipode(g) g - 1|| <= 1e-9 (1 + ||g||).
bool is_grouplike(const TruncatedTensor& g);

/// Degree-one injection of a vector: (0, v, 0, ..., 0).
TruncatedTensor degree_one(std::span<const double> v, std::size_t depth);

/// Right-multiplies s in place by exp(v) without materialising a temporary product.
void mul_exp_inplace(TruncatedTensor& s, std::span<const double> v);

inline TruncatedTensor operator+(const TruncatedTensor& s, const TruncatedTensor& t) { return add(s, t); }
inline TruncatedTensor operator-(const TruncatedTensor& s, const TruncatedTensor& t) { return sub(s, t); }
inline TruncatedTensor operator*(const TruncatedTensor& s, const TruncatedTensor& t) { return mul(s, t); }
inline TruncatedTensor operator*(double c, const TruncatedTensor& t) { return scale(c, t); }

}  // namespace trackscore

#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "bieber/error.hpp"
#include "bieber/matrix.hpp"
#include "bieber/snf.hpp"

namespace bieber {

using Coordinates = std::vector<std::int64_t>;

/// Finite abelian group Z/d_1 + ... + Z/d_r in invariant-factor form
/// (d_1 | d_2 | ... , every d_i >= 2). Elements are coordinate tuples.
class FinAbGroup {
 public:
  FinAbGroup() = default;
  explicit FinAbGroup(std::vector<std::int64_t> invariant_factors) : factors_(std::move(invariant_factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i] < 2)
        throw Error(ErrorKind::ValidationError, "invariant factor must be >= 2, got " + std::to_string(factors_[i]));
      if (i > 0 && factors_[i] % factors_[i - 1] != 0)
        throw Error(ErrorKind::ValidationError, "invariant factors must form a divisibility chain");
    }
  }

  /// Elementary abelian group (Z/p)^rank.
  static FinAbGroup elementary(std::int64_t p, std::size_t rank) {
    return FinAbGroup(std::vector<std::int64_t>(rank, p));
  }

  const std::vector<std::int64_t>& invariant_factors() const noexcept { return factors_; }
  std::size_t rank() const noexcept { return factors_.size(); }
  bool is_trivial() const noexcept { return factors_.empty(); }
  std::int64_t modulus(std::size_t i) const { return factors_[i]; }

  std::int64_t order() const {
    std::int64_t n = 1;
    for (auto d : factors_) n = checked_mul(n, d);
    return n;
  }

  /// Order without the 64-bit limit.
  BigInt exact_order() const {
    BigInt n = 1;
    for (auto d : factors_) n *= d;
    return n;
  }

  std::int64_t exponent() const { return factors_.empty() ? 1 : factors_.back(); }

  Coordinates zero() const { return Coordinates(factors_.size(), 0); }

  Coordinates reduce(Coordinates x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod_floor(x[i], factors_[i]);
    return x;
  }

  bool contains(const Coordinates& x) const {
    if (x.size() != factors_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] < 0 || x[i] >= factors_[i]) return false;
    return true;
  }

  Coordinates add(const Coordinates& a, const Coordinates& b) const {
    Coordinates out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + b[i]) % factors_[i];
    return out;
  }

  Coordinates negate(const Coordinates& a) const {
    Coordinates out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (factors_[i] - a[i]) % factors_[i];
    return out;
  }

  /// Mixed-radix index of a reduced element; inverse of element_at.
  std::int64_t index_of(const Coordinates& x) const {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) idx = idx * factors_[i] + x[i];
    return idx;
  }
  Coordinates element_at(std::int64_t idx) const {
    Coordinates x(factors_.size());
    for (std::size_t i = factors_.size(); i-- > 0;) {
      x[i] = idx % factors_[i];
      idx /= factors_[i];
    }
    return x;
  }

  bool operator==(const FinAbGroup&) const = default;

 private:
  std::vector<std::int64_t> factors_;
};

/// Order of the subgroup cut out by an endomorphism's kernel, i.e. the number
/// of x with M x = 0 in the group. Uses |ker| = |coker| for endomorphisms of a
/// finite group and reads |coker| off the Smith form of [M | diag(d)].
inline BigInt kernel_size(const FinAbGroup& group, const IntMatrix& m) {
  const std::size_t r = group.rank();
  if (r == 0) return 1;
  BigMatrix rel(r, 2 * r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) rel(i, j) = m(i, j);
    rel(i, r + i) = group.modulus(i);
  }
  BigInt order = 1;
  for (const auto& d : smith_normal_form(std::move(rel), SmithTransforms::None).diagonal()) order *= d;
  return order;
}

inline std::int64_t kernel_order(const FinAbGroup& group, const IntMatrix& m) {
  const BigInt n = kernel_size(group, m);
  if (n > std::numeric_limits<std::int64_t>::max()) throw Error(ErrorKind::Overflow, "kernel order exceeds 64 bits");
  return n.convert_to<std::int64_t>();
}

/// Endomorphism of a FinAbGroup written as an integer matrix on generator
/// coordinates; row i is read modulo the i-th invariant factor.
class ActionMatrix {
 public:
  ActionMatrix() = default;
  ActionMatrix(FinAbGroup group, IntMatrix matrix) : group_(std::move(group)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != group_.rank() || matrix_.cols() != group_.rank())
      throw Error(ErrorKind::IllDefinedAction, "action matrix shape does not match the group rank");
    normalize();
  }

  static ActionMatrix identity(const FinAbGroup& group) {
    return ActionMatrix(group, IntMatrix::identity(group.rank()));
  }
  /// x -> k x
  static ActionMatrix scalar(const FinAbGroup& group, std::int64_t k) {
    IntMatrix m(group.rank(), group.rank());
    for (std::size_t i = 0; i < group.rank(); ++i) m(i, i) = k;
    return ActionMatrix(group, std::move(m));
  }

  const FinAbGroup& group() const noexcept { return group_; }
  const IntMatrix& matrix() const noexcept { return matrix_; }

  /// Image of generator j must have order dividing d_j: entry (i, j) is a
  /// multiple of d_i / gcd(d_i, d_j).
  bool is_well_defined() const {
    for (std::size_t i = 0; i < group_.rank(); ++i)
      for (std::size_t j = 0; j < group_.rank(); ++j) {
        const std::int64_t di = group_.modulus(i), dj = group_.modulus(j);
        if (matrix_(i, j) % (di / std::gcd(di, dj)) != 0) return false;
      }
    return true;
  }

  void require_well_defined() const {
    if (!is_well_defined()) throw Error(ErrorKind::IllDefinedAction, "matrix does not induce an endomorphism");
  }

  bool is_automorphism() const { return is_well_defined() && kernel_order(group_, matrix_) == 1; }

  Coordinates apply(const Coordinates& x) const {
    Coordinates y(group_.rank(), 0);
    for (std::size_t i = 0; i < group_.rank(); ++i) {
      const std::int64_t d = group_.modulus(i);
      std::int64_t acc = 0;
      for (std::size_t j = 0; j < group_.rank(); ++j) acc = (acc + mul_mod(matrix_(i, j), x[j], d)) % d;
      y[i] = acc;
    }
    return y;
  }

  /// (*this) after other, i.e. x -> this(other(x)).
  ActionMatrix compose(const ActionMatrix& other) const {
    if (!(group_ == other.group_)) throw Error(ErrorKind::IllDefinedAction, "composing actions on different groups");
    const std::size_t r = group_.rank();
    IntMatrix m(r, r);
    for (std::size_t i = 0; i < r; ++i) {
      const std::int64_t d = group_.modulus(i);
      for (std::size_t j = 0; j < r; ++j) {
        std::int64_t acc = 0;
        for (std::size_t k = 0; k < r; ++k) acc = (acc + mul_mod(matrix_(i, k), other.matrix_(k, j), d)) % d;
        m(i, j) = acc;
      }
    }
    return ActionMatrix(group_, std::move(m));
  }

  ActionMatrix power(std::uint64_t e) const {
    ActionMatrix result = identity(group_);
    ActionMatrix base = *this;
    while (e > 0) {
      if (e & 1U) result = result.compose(base);
      e >>= 1U;
      if (e > 0) base = base.compose(base);
    }
    return result;
  }

  bool is_identity() const { return *this == identity(group_); }

  /// x -> -x on every coordinate.
  bool is_inversion() const { return *this == scalar(group_, -1); }

  /// Multiplicative order as an element of End(group); throws when the
  /// action is not invertible.
  std::int64_t order() const {
    if (!is_automorphism()) throw Error(ErrorKind::IllDefinedAction, "order of a non-automorphism");
    ActionMatrix acc = *this;
    for (std::int64_t k = 1;; ++k) {
      if (acc.is_identity()) return k;
      acc = acc.compose(*this);
      if (k > 10'000'000) throw Error(ErrorKind::BoundExceeded, "automorphism order search");
    }
  }

  bool operator==(const ActionMatrix&) const = default;

 private:
  void normalize() {
    for (std::size_t i = 0; i < group_.rank(); ++i)
      for (std::size_t j = 0; j < group_.rank(); ++j) matrix_(i, j) = mod_floor(matrix_(i, j), group_.modulus(i));
  }

  FinAbGroup group_;
  IntMatrix matrix_;
};

/// Number of group elements fixed by the endomorphism.
inline std::int64_t fixed_point_count(const ActionMatrix& action) {
  action.require_well_defined();
  const std::size_t r = action.group().rank();
  IntMatrix shifted = action.matrix();
  for (std::size_t i = 0; i < r; ++i) shifted(i, i) -= 1;
  return kernel_order(action.group(), shifted);
}

inline BigInt fixed_point_size(const ActionMatrix& action) {
  action.require_well_defined();
  const std::size_t r = action.group().rank();
  IntMatrix shifted = action.matrix();
  for (std::size_t i = 0; i < r; ++i) shifted(i, i) -= 1;
  return kernel_size(action.group(), shifted);
}

}  // namespace bieber

#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "bieber/numeric.hpp"

namespace bieber {

/// Dense univariate polynomial, coefficients stored lowest degree first.
/// The zero polynomial has no coefficients.
template <class T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const T& c) { return Polynomial(std::vector<T>{c}); }
  static Polynomial monomial(std::size_t degree, const T& c = T(1)) {
    std::vector<T> v(degree + 1, T(0));
    v[degree] = c;
    return Polynomial(std::move(v));
  }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree of the zero polynomial is reported as -1.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<T>& coeffs() const noexcept { return coeffs_; }
  T coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : T(0); }
  const T& leading() const { return coeffs_.back(); }

  T evaluate(const T& x) const {
    T acc(0);
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
  }

  bool operator==(const Polynomial&) const = default;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<T> v(std::max(a.coeffs_.size(), b.coeffs_.size()), T(0));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) + b.coeff(i);
    return Polynomial(std::move(v));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<T> v(std::max(a.coeffs_.size(), b.coeffs_.size()), T(0));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) - b.coeff(i);
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> v(a.coeffs_.size() + b.coeffs_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const T& c, const Polynomial& a) {
    std::vector<T> v = a.coeffs_;
    for (auto& x : v) x *= c;
    return Polynomial(std::move(v));
  }

  /// Division with remainder by a divisor whose leading coefficient is a
  /// unit for T (monic over the integers, or anything nonzero over a field).
  /// Throws when an integer quotient would be inexact.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const {
    assert(!divisor.is_zero());
    std::vector<T> rem = coeffs_;
    const std::size_t dn = divisor.coeffs_.size();
    if (rem.size() < dn) return {Polynomial{}, *this};
    std::vector<T> quot(rem.size() - dn + 1, T(0));
    const T& lead = divisor.leading();
    for (std::size_t k = quot.size(); k-- > 0;) {
      const T& top = rem[k + dn - 1];
      if (top == 0) continue;
      T q = top / lead;
      if (q * lead != top) throw Error(ErrorKind::InternalNonInteger, "inexact polynomial division");
      quot[k] = q;
      for (std::size_t j = 0; j < dn; ++j) rem[k + j] -= q * divisor.coeffs_[j];
    }
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
  }

  Polynomial operator%(const Polynomial& divisor) const { return divmod(divisor).second; }

  /// p(x) -> p(x^k)
  Polynomial substitute_power(std::size_t k) const {
    if (is_zero()) return {};
    std::vector<T> v((coeffs_.size() - 1) * k + 1, T(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) v[i * k] = coeffs_[i];
    return Polynomial(std::move(v));
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<T> coeffs_;
};

using IntPolynomial = Polynomial<std::int64_t>;

template <class T>
std::ostream& operator<<(std::ostream& os, const Polynomial<T>& p) {
  if (p.is_zero()) return os << "0";
  bool first = true;
  for (std::size_t i = p.coeffs().size(); i-- > 0;) {
    const T& c = p.coeffs()[i];
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    T mag = c < 0 ? T(-c) : c;
    if (mag != 1 || i == 0) os << mag;
    if (i > 0) os << "x";
    if (i > 1) os << "^" << i;
    first = false;
  }
  return os;
}

}  // namespace bieber

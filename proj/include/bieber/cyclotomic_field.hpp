#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "bieber/arith.hpp"
#include "bieber/numeric.hpp"
#include "bieber/polynomial.hpp"

namespace bieber {

using RationalPolynomial = Polynomial<Rational>;

inline RationalPolynomial to_rational(const IntPolynomial& p) {
  std::vector<Rational> c;
  for (auto v : p.coeffs()) c.emplace_back(v);
  return RationalPolynomial(std::move(c));
}

/// Exact element of Q(zeta_m), stored as a polynomial in zeta_m reduced
/// modulo Phi_m.
class CyclotomicNumber {
 public:
  explicit CyclotomicNumber(std::int64_t m) : m_(m), modulus_(to_rational(cyclotomic_poly(m))) {}
  CyclotomicNumber(std::int64_t m, const RationalPolynomial& value) : CyclotomicNumber(m) {
    value_ = value % modulus_;
  }

  /// sum_i coeff_i * zeta_m^{exponent_i}
  static CyclotomicNumber from_powers(std::int64_t m, const std::vector<std::pair<std::int64_t, Rational>>& terms) {
    std::vector<Rational> c(static_cast<std::size_t>(m), Rational(0));
    for (const auto& [e, coeff] : terms) c[static_cast<std::size_t>(mod_floor(e, m))] += coeff;
    return CyclotomicNumber(m, RationalPolynomial(std::move(c)));
  }

  std::int64_t conductor() const noexcept { return m_; }
  const RationalPolynomial& value() const noexcept { return value_; }
  bool is_rational() const { return value_.degree() <= 0; }
  Rational rational_value() const { return value_.coeff(0); }

  CyclotomicNumber operator*(const CyclotomicNumber& other) const {
    return CyclotomicNumber(m_, value_ * other.value_);
  }

  /// Image under zeta -> zeta^k, gcd(k, m) = 1.
  CyclotomicNumber conjugate(std::int64_t k) const {
    return CyclotomicNumber(m_, value_.substitute_power(static_cast<std::size_t>(mod_floor(k, m_))));
  }

  /// Norm down to Q: product of all Galois conjugates.
  Rational norm() const {
    CyclotomicNumber acc(m_, RationalPolynomial::constant(Rational(1)));
    for (std::int64_t k = 1; k <= m_; ++k)
      if (std::gcd(k, m_) == 1) acc = acc * conjugate(k);
    if (!acc.is_rational()) throw Error(ErrorKind::InternalNonInteger, "norm did not reduce to a rational");
    return acc.rational_value();
  }

 private:
  std::int64_t m_;
  RationalPolynomial modulus_;
  RationalPolynomial value_;
};

}  // namespace bieber

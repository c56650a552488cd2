#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <string>

#include "bieber/error.hpp"

namespace bieber {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Overflow-checked 64-bit helpers. The BigInt overloads exist so that
// templates over the scalar type can call them uniformly.
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "64-bit addition");
  return r;
}
inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "64-bit subtraction");
  return r;
}
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "64-bit multiplication");
  return r;
}
inline BigInt checked_add(const BigInt& a, const BigInt& b) { return a + b; }
inline BigInt checked_sub(const BigInt& a, const BigInt& b) { return a - b; }
inline BigInt checked_mul(const BigInt& a, const BigInt& b) { return a * b; }

inline std::int64_t abs_value(std::int64_t a) {
  if (a == INT64_MIN) throw Error(ErrorKind::Overflow, "abs of INT64_MIN");
  return a < 0 ? -a : a;
}
inline BigInt abs_value(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

/// Floor division for integers.
template <class T>
T floor_div(const T& a, const T& b) {
  T q = a / b;
  T r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
  return q;
}

/// Least nonnegative residue of a modulo m (m > 0).
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}
inline std::int64_t mod_floor(const BigInt& a, std::int64_t m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r.convert_to<std::int64_t>();
}

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(mod_floor(a, m)) * mod_floor(b, m)) % m);
}

inline std::int64_t pow_mod(std::int64_t base, std::uint64_t exp, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t result = 1;
  base = mod_floor(base, m);
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

/// Inverse of a modulo m; throws NotCoprime when gcd(a, m) != 1.
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = mod_floor(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw Error(ErrorKind::NotCoprime, std::to_string(a) + " mod " + std::to_string(m));
  return mod_floor(old_s, m);
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

}  // namespace bieber

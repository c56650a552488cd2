#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "bieber/error.hpp"
#include "bieber/numeric.hpp"
#include "bieber/polynomial.hpp"

namespace bieber {

/// Prime factorization by trial division; returns (prime, exponent) pairs.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "factorize expects n >= 1, got " + std::to_string(n));
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

inline bool is_squarefree(std::int64_t n) {
  for (const auto& [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

/// Distinct prime factors in increasing order.
inline std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (const auto& [p, e] : factorize(n)) out.push_back(p);
  return out;
}

inline std::vector<std::int64_t> divisors_of(std::int64_t n) {
  std::vector<std::int64_t> out{1};
  for (const auto& [p, e] : factorize(n)) {
    const std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Euler's totient for any n >= 1.
inline std::int64_t euler_phi(std::int64_t n) {
  std::int64_t phi = n;
  for (const auto& [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

/// Least e >= 1 with a^e = 1 (mod m).
inline std::int64_t mult_order(std::int64_t a, std::int64_t m) {
  if (m < 2) throw Error(ErrorKind::OutOfRange, "mult_order modulus must exceed 1");
  a = mod_floor(a, m);
  if (std::gcd(a, m) != 1)
    throw Error(ErrorKind::NotCoprime, std::to_string(a) + " is not a unit mod " + std::to_string(m));
  // The order divides phi(m): test divisors in increasing order.
  for (std::int64_t e : divisors_of(euler_phi(m)))
    if (pow_mod(a, static_cast<std::uint64_t>(e), m) == 1) return e;
  throw Error(ErrorKind::InternalNonInteger, "order search failed");
}

/// An unordered pair (s, t) of divisors of delta, s with an odd and t with an
/// even number of prime factors, whose ratio max/min is the prime p.
struct PrimeRatioPair {
  std::int64_t s = 0;
  std::int64_t t = 0;
  std::int64_t p = 0;

  std::int64_t smaller() const { return std::min(s, t); }
  std::int64_t larger() const { return std::max(s, t); }
  bool s_is_larger() const { return s > t; }

  auto operator<=>(const PrimeRatioPair&) const = default;
};

/// The holonomy order with its prime set, divisor lattice and parity split.
class SquarefreeContext {
 public:
  std::int64_t delta() const noexcept { return delta_; }
  const std::vector<std::int64_t>& primes() const noexcept { return primes_; }
  const std::vector<std::int64_t>& divisors() const noexcept { return divisors_; }
  const std::vector<std::int64_t>& d0() const noexcept { return d0_; }
  const std::vector<std::int64_t>& d1() const noexcept { return d1_; }
  /// All prime-ratio pairs (s in d1, t in d0), ordered by (s, t).
  const std::vector<PrimeRatioPair>& prime_ratio_pairs() const noexcept { return pairs_; }

  bool divides(std::int64_t d) const noexcept { return d > 0 && delta_ % d == 0; }
  bool has_prime(std::int64_t p) const noexcept {
    return std::find(primes_.begin(), primes_.end(), p) != primes_.end();
  }
  std::size_t prime_count() const noexcept { return primes_.size(); }

  /// phi(d) for a divisor d of delta.
  std::int64_t phi(std::int64_t d) const {
    require_divisor(d);
    return euler_phi(d);
  }

  void require_divisor(std::int64_t d) const {
    if (!divides(d))
      throw Error(ErrorKind::OutOfRange, std::to_string(d) + " does not divide " + std::to_string(delta_));
  }

  bool operator==(const SquarefreeContext& other) const { return delta_ == other.delta_; }

  friend SquarefreeContext build_context(std::int64_t delta);

 private:
  std::int64_t delta_ = 0;
  std::vector<std::int64_t> primes_;
  std::vector<std::int64_t> divisors_;
  std::vector<std::int64_t> d0_;
  std::vector<std::int64_t> d1_;
  std::vector<PrimeRatioPair> pairs_;
};

inline SquarefreeContext build_context(std::int64_t delta) {
  if (delta <= 1) throw Error(ErrorKind::OutOfRange, "delta must exceed 1, got " + std::to_string(delta));
  SquarefreeContext ctx;
  for (const auto& [p, e] : factorize(delta)) {
    if (e > 1)
      throw Error(ErrorKind::NotSquarefree,
                  std::to_string(delta) + " is divisible by " + std::to_string(p) + "^2");
    ctx.primes_.push_back(p);
  }
  ctx.delta_ = delta;
  ctx.divisors_ = divisors_of(delta);
  for (std::int64_t d : ctx.divisors_) (prime_factors(d).size() % 2 == 0 ? ctx.d0_ : ctx.d1_).push_back(d);
  for (std::int64_t s : ctx.d1_)
    for (std::int64_t t : ctx.d0_) {
      const std::int64_t hi = std::max(s, t), lo = std::min(s, t);
      if (hi % lo == 0 && is_prime(hi / lo)) ctx.pairs_.push_back({s, t, hi / lo});
    }
  return ctx;
}

/// Number of field factors of Z[zeta_s]/Phi_t(zeta_s): the number of primes
/// above p in Q(zeta_m), m = min(s, t).
inline std::int64_t compute_v(const PrimeRatioPair& pair) {
  const std::int64_t m = pair.smaller();
  if (m == 1) return 1;
  return euler_phi(m) / mult_order(pair.p, m);
}

namespace detail {
inline std::map<std::int64_t, IntPolynomial>& cyclotomic_cache() {
  static std::map<std::int64_t, IntPolynomial> cache;
  return cache;
}
inline std::mutex& cyclotomic_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// Phi_d, obtained by dividing x^d - 1 by Phi_e for every proper divisor e.
inline IntPolynomial cyclotomic_poly(std::int64_t d) {
  if (d < 1) throw Error(ErrorKind::OutOfRange, "cyclotomic index must be positive");
  {
    std::lock_guard lock(detail::cyclotomic_mutex());
    auto& cache = detail::cyclotomic_cache();
    if (auto it = cache.find(d); it != cache.end()) return it->second;
  }
  IntPolynomial acc = IntPolynomial::monomial(static_cast<std::size_t>(d)) - IntPolynomial::constant(1);
  for (std::int64_t e : divisors_of(d)) {
    if (e == d) continue;
    auto [q, r] = acc.divmod(cyclotomic_poly(e));
    if (!r.is_zero()) throw Error(ErrorKind::InternalNonInteger, "cyclotomic division left a remainder");
    acc = std::move(q);
  }
  std::lock_guard lock(detail::cyclotomic_mutex());
  detail::cyclotomic_cache().emplace(d, acc);
  return acc;
}

}  // namespace bieber

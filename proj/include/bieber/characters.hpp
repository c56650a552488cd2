#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "bieber/arith.hpp"
#include "bieber/cyclotomic_field.hpp"
#include "bieber/units.hpp"

namespace bieber {

enum class Parity { Even, Odd };

/// A Dirichlet character mod m, chi(a) = zeta_order^{value_exponent(a)}.
struct DirichletCharacter {
  std::int64_t modulus = 0;
  std::int64_t order = 1;
  std::vector<std::int64_t> generator_exponents;  ///< k_i: chi(g_i) = zeta_{o_i}^{k_i}
  std::map<std::int64_t, std::int64_t> value_exponents;  ///< unit a -> exponent
  std::int64_t conductor = 1;
  Parity parity = Parity::Even;

  std::int64_t value_exponent(std::int64_t a) const { return value_exponents.at(mod_floor(a, modulus)); }

  /// Values of the primitive character inducing this one: b mod conductor ->
  /// exponent, for b coprime to the conductor.
  std::map<std::int64_t, std::int64_t> primitive_values() const {
    std::map<std::int64_t, std::int64_t> out;
    for (const auto& [a, e] : value_exponents) out.emplace(a % conductor, e);
    return out;
  }

  /// B_{1,chi} of the primitive character: (1/f) sum_{b=1}^{f} chi_f(b) b.
  CyclotomicNumber bernoulli_b1() const {
    std::vector<std::pair<std::int64_t, Rational>> terms;
    const auto prim = primitive_values();
    for (std::int64_t b = 1; b <= conductor; ++b) {
      if (std::gcd(b, conductor) != 1) continue;
      const std::int64_t e = conductor == 1 ? 0 : prim.at(b % conductor);
      terms.emplace_back(e, Rational(b, conductor));
    }
    return CyclotomicNumber::from_powers(order, terms);
  }
};

/// All characters of (Z/m)^x, indexed by generator exponent vectors in
/// mixed-radix order.
inline std::vector<DirichletCharacter> enumerate_characters(std::int64_t m) {
  const UnitGroup units = unit_group(m);
  const auto& orders = units.generator_orders();
  std::int64_t lcm_order = 1;
  for (auto o : orders) lcm_order = std::lcm(lcm_order, o);

  std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> logs;  // unit, exponent vector
  for (std::int64_t a : units.elements()) logs.emplace_back(a, units.decompose(a));

  const std::int64_t count = units.order();
  const auto divisors = divisors_of(m);
  std::vector<DirichletCharacter> out;
  for (std::int64_t idx = 0; idx < count; ++idx) {
    DirichletCharacter chi;
    chi.modulus = m;
    chi.generator_exponents.assign(orders.size(), 0);
    std::int64_t rem = idx;
    for (std::size_t i = orders.size(); i-- > 0;) {
      chi.generator_exponents[i] = rem % orders[i];
      rem /= orders[i];
    }
    std::int64_t g = lcm_order;
    std::map<std::int64_t, std::int64_t> raw;
    for (const auto& [a, e] : logs) {
      std::int64_t v = 0;
      for (std::size_t i = 0; i < orders.size(); ++i)
        v = (v + chi.generator_exponents[i] * e[i] % orders[i] * (lcm_order / orders[i])) % lcm_order;
      raw[a] = v;
      g = std::gcd(g, v);
    }
    // reduce to the character's own order
    chi.order = lcm_order / g;
    for (const auto& [a, v] : raw) chi.value_exponents[a] = v / g;
    const std::int64_t minus_one = chi.value_exponents.at(m - 1);
    chi.parity = (chi.order % 2 == 0 && minus_one == chi.order / 2) ? Parity::Odd : Parity::Even;
    for (std::int64_t f : divisors) {
      bool trivial_on_kernel = true;
      for (const auto& [a, v] : chi.value_exponents)
        if (a % f == 1 % f && v != 0) {
          trivial_on_kernel = false;
          break;
        }
      if (trivial_on_kernel) {
        chi.conductor = f;
        break;
      }
    }
    out.push_back(std::move(chi));
  }
  return out;
}

}  // namespace bieber

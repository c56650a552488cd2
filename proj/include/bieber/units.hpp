#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "bieber/arith.hpp"
#include "bieber/error.hpp"

namespace bieber {

/// One prime-power factor q = p^e of the modulus and its unit group
/// generators, written modulo q. Independent, so the local group is the
/// direct product of the cyclic groups they generate.
struct UnitComponent {
  std::int64_t prime = 0;
  int exponent = 0;
  std::int64_t prime_power = 0;
  std::vector<std::int64_t> local_generators;
  std::vector<std::int64_t> orders;
};

/// Chinese-remainder lift: x = r mod q, x = 1 mod n/q.
inline std::int64_t crt_lift(std::int64_t residue, std::int64_t q, std::int64_t n) {
  const std::int64_t rest = n / q;
  if (rest == 1) return mod_floor(residue, q);
  // x = 1 + rest * k with 1 + rest*k = residue (mod q)
  const std::int64_t k = mul_mod(mod_floor(residue - 1, q), inverse_mod(rest, q), q);
  return mod_floor(1 + rest * k, n);
}

/// Smallest primitive root modulo an odd prime power.
inline std::int64_t primitive_root(std::int64_t p, int e) {
  const std::int64_t q = [&] {
    std::int64_t v = 1;
    for (int i = 0; i < e; ++i) v *= p;
    return v;
  }();
  const std::int64_t phi = euler_phi(q);
  for (std::int64_t g = 2; g < q; ++g) {
    if (g % p == 0) continue;
    if (mult_order(g, q) == phi) return g;
  }
  if (q == 2) return 1;
  throw Error(ErrorKind::InternalNonInteger, "no primitive root found mod " + std::to_string(q));
}

/// (Z/n)^x with independent generators, one cyclic factor per odd prime power
/// and at most two for the 2-part.
class UnitGroup {
 public:
  std::int64_t modulus() const noexcept { return modulus_; }
  const std::vector<std::int64_t>& generators() const noexcept { return generators_; }
  const std::vector<std::int64_t>& generator_orders() const noexcept { return orders_; }
  const std::vector<UnitComponent>& crt_components() const noexcept { return components_; }

  std::int64_t order() const {
    std::int64_t n = 1;
    for (auto o : orders_) n *= o;
    return n;
  }

  /// Exponent vector e with prod g_i^{e_i} = a (mod n).
  std::vector<std::int64_t> decompose(std::int64_t a) const {
    a = mod_floor(a, modulus_);
    if (std::gcd(a, modulus_) != 1)
      throw Error(ErrorKind::NotCoprime, std::to_string(a) + " is not a unit mod " + std::to_string(modulus_));
    std::vector<std::int64_t> exps;
    for (const auto& comp : components_) {
      const std::int64_t local = a % comp.prime_power;
      bool found = false;
      // at most two generators per component; search the exponent box
      std::vector<std::int64_t> e(comp.orders.size(), 0);
      const std::int64_t box = [&] {
        std::int64_t b = 1;
        for (auto o : comp.orders) b *= o;
        return b;
      }();
      for (std::int64_t idx = 0; idx < box && !found; ++idx) {
        std::int64_t rem = idx, value = 1;
        for (std::size_t i = 0; i < comp.orders.size(); ++i) {
          e[i] = rem % comp.orders[i];
          rem /= comp.orders[i];
          value = mul_mod(value, pow_mod(comp.local_generators[i], static_cast<std::uint64_t>(e[i]), comp.prime_power),
                          comp.prime_power);
        }
        if (value == local % comp.prime_power || comp.prime_power == 1) found = true;
      }
      if (!found && comp.prime_power > 2)
        throw Error(ErrorKind::DecompositionFailure, "discrete log failed mod " + std::to_string(comp.prime_power));
      exps.insert(exps.end(), e.begin(), e.end());
    }
    return exps;
  }

  /// prod g_i^{e_i} mod n.
  std::int64_t compose(const std::vector<std::int64_t>& exponents) const {
    std::int64_t v = 1 % modulus_;
    for (std::size_t i = 0; i < generators_.size(); ++i)
      v = mul_mod(v, pow_mod(generators_[i], static_cast<std::uint64_t>(mod_floor(exponents[i], orders_[i])), modulus_),
                  modulus_);
    return v;
  }

  /// Every unit, enumerated in mixed-radix order of the exponent vectors.
  std::vector<std::int64_t> elements() const {
    std::vector<std::int64_t> out;
    const std::int64_t n = order();
    out.reserve(static_cast<std::size_t>(n));
    std::vector<std::int64_t> e(orders_.size(), 0);
    for (std::int64_t idx = 0; idx < n; ++idx) {
      std::int64_t rem = idx;
      for (std::size_t i = orders_.size(); i-- > 0;) {
        e[i] = rem % orders_[i];
        rem /= orders_[i];
      }
      out.push_back(compose(e));
    }
    return out;
  }

  friend UnitGroup unit_group(std::int64_t n);

 private:
  std::int64_t modulus_ = 0;
  std::vector<std::int64_t> generators_;
  std::vector<std::int64_t> orders_;
  std::vector<UnitComponent> components_;
};

inline UnitGroup unit_group(std::int64_t n) {
  if (n < 2) throw Error(ErrorKind::OutOfRange, "unit group modulus must be >= 2");
  UnitGroup g;
  g.modulus_ = n;
  for (const auto& [p, e] : factorize(n)) {
    UnitComponent comp;
    comp.prime = p;
    comp.exponent = e;
    comp.prime_power = 1;
    for (int i = 0; i < e; ++i) comp.prime_power *= p;
    const std::int64_t q = comp.prime_power;
    if (p == 2) {
      if (e == 2) {
        comp.local_generators = {3};
        comp.orders = {2};
      } else if (e >= 3) {
        comp.local_generators = {q - 1, 5};
        comp.orders = {2, q / 4};
      }
    } else {
      comp.local_generators = {primitive_root(p, e)};
      comp.orders = {euler_phi(q)};
    }
    for (std::size_t i = 0; i < comp.local_generators.size(); ++i) {
      g.generators_.push_back(crt_lift(comp.local_generators[i], q, n));
      g.orders_.push_back(comp.orders[i]);
    }
    g.components_.push_back(std::move(comp));
  }
  return g;
}

/// The subgroup of (Z/delta)^x that keeps the full factor Gal(zeta_p) for
/// primes outside D and only {+1, -1 mod p} for primes in D.
class SubgroupHD {
 public:
  const UnitGroup& parent() const noexcept { return parent_; }
  const std::vector<std::int64_t>& special_primes() const noexcept { return special_; }
  const std::vector<std::int64_t>& generators() const noexcept { return generators_; }
  const std::vector<std::int64_t>& generator_orders() const noexcept { return orders_; }

  std::int64_t order() const {
    std::int64_t n = 1;
    for (auto o : orders_) n *= o;
    return n;
  }
  std::int64_t index() const { return parent_.order() / order(); }

  std::vector<std::int64_t> elements() const {
    std::vector<std::int64_t> out;
    const std::int64_t n = order(), m = parent_.modulus();
    std::vector<std::int64_t> e(orders_.size(), 0);
    for (std::int64_t idx = 0; idx < n; ++idx) {
      std::int64_t rem = idx, v = 1 % m;
      for (std::size_t i = orders_.size(); i-- > 0;) {
        e[i] = rem % orders_[i];
        rem /= orders_[i];
      }
      for (std::size_t i = 0; i < orders_.size(); ++i)
        v = mul_mod(v, pow_mod(generators_[i], static_cast<std::uint64_t>(e[i]), m), m);
      out.push_back(v);
    }
    return out;
  }

  friend SubgroupHD subgroup_hd(const UnitGroup& units, std::vector<std::int64_t> special);

 private:
  UnitGroup parent_;
  std::vector<std::int64_t> special_;
  std::vector<std::int64_t> generators_;
  std::vector<std::int64_t> orders_;
};

inline SubgroupHD subgroup_hd(const UnitGroup& units, std::vector<std::int64_t> special) {
  std::sort(special.begin(), special.end());
  special.erase(std::unique(special.begin(), special.end()), special.end());
  const std::int64_t n = units.modulus();
  for (std::int64_t p : special) {
    if (p <= 1 || n % p != 0) throw Error(ErrorKind::PrimeNotInModulus, std::to_string(p) + " does not divide " + std::to_string(n));
    if (p == 2) throw Error(ErrorKind::EvenSpecialPrime, "Gal(zeta_2) is trivial and has no subgroup of order 2");
  }
  SubgroupHD h;
  h.parent_ = units;
  h.special_ = special;
  std::size_t offset = 0;
  for (const auto& comp : units.crt_components()) {
    const bool in_d = std::binary_search(special.begin(), special.end(), comp.prime);
    if (in_d) {
      if (comp.exponent != 1)
        throw Error(ErrorKind::OutOfRange, "special prime must divide the modulus exactly once");
      h.generators_.push_back(crt_lift(comp.prime_power - 1, comp.prime_power, n));
      h.orders_.push_back(2);
    } else {
      for (std::size_t i = 0; i < comp.local_generators.size(); ++i) {
        h.generators_.push_back(units.generators()[offset + i]);
        h.orders_.push_back(units.generator_orders()[offset + i]);
      }
    }
    offset += comp.local_generators.size();
  }
  return h;
}

}  // namespace bieber

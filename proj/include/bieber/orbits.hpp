#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "bieber/abelian.hpp"
#include "bieber/error.hpp"

namespace bieber {

/// Componentwise action on a direct product of FinAbGroups.
struct DiagonalAction {
  std::vector<ActionMatrix> factors;

  static DiagonalAction identity_on(const std::vector<FinAbGroup>& groups) {
    DiagonalAction a;
    for (const auto& g : groups) a.factors.push_back(ActionMatrix::identity(g));
    return a;
  }

  DiagonalAction compose(const DiagonalAction& other) const {
    DiagonalAction out;
    for (std::size_t i = 0; i < factors.size(); ++i) out.factors.push_back(factors[i].compose(other.factors[i]));
    return out;
  }
  DiagonalAction power(std::uint64_t e) const {
    DiagonalAction out;
    for (const auto& f : factors) out.factors.push_back(f.power(e));
    return out;
  }
  bool is_identity() const {
    return std::all_of(factors.begin(), factors.end(), [](const ActionMatrix& a) { return a.is_identity(); });
  }
  std::int64_t fixed_points() const {
    std::int64_t n = 1;
    for (const auto& f : factors) n = checked_mul(n, fixed_point_count(f));
    return n;
  }
  bool operator==(const DiagonalAction&) const = default;
};

/// An abelian group given by commuting generators g_j with g_j^{o_j} = 1,
/// together with where each generator acts. Elements of the acting group are
/// exponent vectors; the action need not be faithful.
struct GroupAction {
  std::vector<FinAbGroup> module;  ///< factors of the product being acted on
  std::vector<std::int64_t> generator_orders;
  std::vector<DiagonalAction> generator_actions;

  std::int64_t acting_order() const {
    std::int64_t n = 1;
    for (auto o : generator_orders) n = checked_mul(n, o);
    return n;
  }
  std::int64_t module_order() const {
    std::int64_t n = 1;
    for (const auto& g : module) n = checked_mul(n, g.order());
    return n;
  }

  /// Checks the defining relations: each generator is an automorphism of
  /// every factor, g^o = 1, and generators commute.
  void validate() const {
    if (generator_orders.size() != generator_actions.size())
      throw Error(ErrorKind::NotAGroupAction, "generator count mismatch");
    for (std::size_t j = 0; j < generator_actions.size(); ++j) {
      const auto& g = generator_actions[j];
      if (g.factors.size() != module.size()) throw Error(ErrorKind::NotAGroupAction, "factor count mismatch");
      if (generator_orders[j] < 1) throw Error(ErrorKind::NotAGroupAction, "generator order must be positive");
      for (std::size_t f = 0; f < module.size(); ++f) {
        if (!(g.factors[f].group() == module[f])) throw Error(ErrorKind::NotAGroupAction, "action on the wrong group");
        if (!g.factors[f].is_automorphism())
          throw Error(ErrorKind::NotAGroupAction, "generator " + std::to_string(j) + " is not an automorphism");
      }
      if (!g.power(static_cast<std::uint64_t>(generator_orders[j])).is_identity())
        throw Error(ErrorKind::NotAGroupAction,
                    "generator " + std::to_string(j) + " violates g^" + std::to_string(generator_orders[j]) + " = 1");
      for (std::size_t k = 0; k < j; ++k)
        if (!(g.compose(generator_actions[k]) == generator_actions[k].compose(g)))
          throw Error(ErrorKind::NotAGroupAction, "generators do not commute");
    }
  }

  /// The action of every element of the acting group, mixed-radix order.
  std::vector<DiagonalAction> element_actions() const {
    std::vector<DiagonalAction> out{DiagonalAction::identity_on(module)};
    for (std::size_t j = 0; j < generator_actions.size(); ++j) {
      std::vector<DiagonalAction> next;
      next.reserve(out.size() * static_cast<std::size_t>(generator_orders[j]));
      for (const auto& base : out) {
        DiagonalAction cur = base;
        for (std::int64_t e = 0; e < generator_orders[j]; ++e) {
          next.push_back(cur);
          cur = cur.compose(generator_actions[j]);
        }
      }
      out = std::move(next);
    }
    return out;
  }
};

/// Burnside: average number of fixed points over the acting group.
inline std::int64_t orbit_count(const GroupAction& action) {
  action.validate();
  BigInt total = 0;
  for (const auto& g : action.element_actions()) total += g.fixed_points();
  const std::int64_t n = action.acting_order();
  if (total % n != 0) throw Error(ErrorKind::NotAGroupAction, "Burnside sum is not divisible by the group order");
  return BigInt(total / n).convert_to<std::int64_t>();
}

/// An element of a product of FinAbGroups: one coordinate tuple per factor.
using ProductElement = std::vector<Coordinates>;
using Orbit = std::vector<ProductElement>;

inline constexpr std::int64_t kDefaultEnumerationBound = 1'000'000;

/// Explicit orbit partition by enumeration. Orbits are listed by their least
/// element (lexicographic on the product coordinates), each orbit sorted.
inline std::vector<Orbit> brute_force_orbits(const GroupAction& action,
                                             std::int64_t bound = kDefaultEnumerationBound) {
  action.validate();
  const std::int64_t size = action.module_order();
  if (size > bound)
    throw Error(ErrorKind::EnumerationBoundExceeded,
                "module of order " + std::to_string(size) + " exceeds bound " + std::to_string(bound));

  auto decode = [&](std::int64_t idx) {
    ProductElement x(action.module.size());
    for (std::size_t f = action.module.size(); f-- > 0;) {
      const std::int64_t o = action.module[f].order();
      x[f] = action.module[f].element_at(idx % o);
      idx /= o;
    }
    return x;
  };
  auto encode = [&](const ProductElement& x) {
    std::int64_t idx = 0;
    for (std::size_t f = 0; f < action.module.size(); ++f)
      idx = idx * action.module[f].order() + action.module[f].index_of(x[f]);
    return idx;
  };

  std::vector<std::int64_t> orbit_of(static_cast<std::size_t>(size), -1);
  std::vector<Orbit> orbits;
  // Closing under the generators suffices for a finite group.
  for (std::int64_t start = 0; start < size; ++start) {
    if (orbit_of[start] >= 0) continue;
    const auto id = static_cast<std::int64_t>(orbits.size());
    Orbit orbit{decode(start)};
    orbit_of[start] = id;
    for (std::size_t k = 0; k < orbit.size(); ++k) {
      for (const auto& g : action.generator_actions) {
        ProductElement y(orbit[k].size());
        for (std::size_t f = 0; f < y.size(); ++f) y[f] = g.factors[f].apply(orbit[k][f]);
        const std::int64_t idx = encode(y);
        if (orbit_of[idx] < 0) {
          orbit_of[idx] = id;
          orbit.push_back(std::move(y));
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

/// Chooses enumeration for small instances and Burnside otherwise.
inline std::int64_t count_orbits(const GroupAction& action) {
  if (action.acting_order() <= 64 && action.module_order() <= 4096)
    return static_cast<std::int64_t>(brute_force_orbits(action).size());
  return orbit_count(action);
}

}  // namespace bieber

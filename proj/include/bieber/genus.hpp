#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bieber/arith.hpp"
#include "bieber/classgroups.hpp"
#include "bieber/cohomology.hpp"
#include "bieber/error.hpp"
#include "bieber/lattice.hpp"
#include "bieber/orbits.hpp"
#include "bieber/units.hpp"

namespace bieber {

/// How a normalizer orbit term was settled.
enum class TermSource { SmallDelta, Holomorph, UserSupplied, Unknown };

inline std::string to_string(TermSource s) {
  switch (s) {
    case TermSource::SmallDelta: return "small-delta";
    case TermSource::Holomorph: return "holomorph";
    case TermSource::UserSupplied: return "user-supplied";
    case TermSource::Unknown: return "unknown";
  }
  return "?";
}

/// User-supplied orbit counts, keyed by prime and representative index.
struct OrbitPolicy {
  std::map<std::int64_t, std::map<std::size_t, std::int64_t>> supplied;

  void supply(std::int64_t p, std::size_t rep, std::int64_t count) {
    if (count < 1)
      throw Error(ErrorKind::ValidationError, "orbit count for p=" + std::to_string(p) + " must be positive");
    supplied[p][rep] = count;
  }
  std::optional<std::int64_t> lookup(std::int64_t p, std::size_t rep) const {
    auto it = supplied.find(p);
    if (it == supplied.end()) return std::nullopt;
    auto jt = it->second.find(rep);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
  }
};

/// Reads "p rep_index count" triples, one per line, '#' comments allowed.
inline OrbitPolicy parse_orbit_terms(const std::string& text) {
  OrbitPolicy policy;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 3)
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 'p rep_index count'");
    const std::int64_t p = detail::parse_int(toks[0], lineno);
    const std::int64_t rep = detail::parse_int(toks[1], lineno);
    const std::int64_t count = detail::parse_int(toks[2], lineno);
    if (rep < 0) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": negative representative index");
    if (policy.lookup(p, static_cast<std::size_t>(rep)))
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": duplicate entry");
    policy.supply(p, static_cast<std::size_t>(rep), count);
  }
  return policy;
}

struct OrbitTerm {
  std::size_t representative = 0;
  std::int64_t prime = 0;
  TermSource source = TermSource::Unknown;
  std::optional<std::int64_t> value;
  /// Largest value the term can take: the size of the set being acted on.
  BigInt maximum = 0;
};

struct PrimeData {
  std::int64_t prime = 0;
  BlockCensus census;
  BigInt h2_order = 1;
  BigInt fixed_nonzero = 0;
  bool special = false;
};

struct GenusReport {
  std::int64_t delta = 0;
  std::string lattice;
  std::vector<std::int64_t> special_primes;
  std::vector<PrimeData> primes;
  BigInt x_size = 0;
  std::int64_t crystal_class_size = 0;
  /// Conductors labelling the coordinates of each representative.
  std::vector<std::int64_t> conductors;
  std::vector<ProductElement> representatives;
  bool representatives_enumerated = true;
  std::vector<OrbitTerm> terms;
  std::optional<BigInt> genus;
  BigInt lower = 0;
  BigInt upper = 0;
  BigInt upper_bound = 0;
  bool special_formula = false;
  std::vector<std::string> notes;

  bool bounded() const { return !genus.has_value(); }
};

namespace detail {

/// Diagonal action of a subgroup of (Z/delta)^x on prod_{d | delta} H(Q(zeta_d)).
inline GroupAction class_tuple_action(const SquarefreeContext& ctx, const std::vector<std::int64_t>& special,
                                      const Registry& registry) {
  const UnitGroup units = unit_group(ctx.delta());
  std::vector<std::int64_t> odd_special;
  for (std::int64_t p : special)
    if (p != 2) odd_special.push_back(p);

  std::vector<std::int64_t> gens, orders;
  if (odd_special.empty()) {
    gens = units.generators();
    orders = units.generator_orders();
  } else {
    const SubgroupHD h = subgroup_hd(units, odd_special);
    gens = h.generators();
    orders = h.generator_orders();
  }

  GroupAction action;
  for (std::int64_t d : ctx.divisors()) action.module.push_back(registry.group(d));
  for (std::size_t j = 0; j < gens.size(); ++j) {
    DiagonalAction g;
    for (std::int64_t d : ctx.divisors()) g.factors.push_back(restriction_action(units, gens[j], d, registry));
    action.generator_actions.push_back(std::move(g));
    action.generator_orders.push_back(orders[j]);
  }
  return action;
}

inline bool is_regular_plus_trivial(const LatticeSpec& spec) {
  if (spec.blocks.size() != 2) return false;
  const auto& a = spec.blocks[0];
  const auto& b = spec.blocks[1];
  auto is_r = [&](const Block& x) { return x.kind == BlockKind::Regular && x.index == spec.context.delta(); };
  auto is_z = [](const Block& x) { return x.kind == BlockKind::Trivial; };
  return (is_r(a) && is_z(b)) || (is_z(a) && is_r(b));
}

inline BigInt ipow(const BigInt& base, std::int64_t e) {
  BigInt r = 1;
  for (std::int64_t i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace detail

/// Number of crystal-class lattices: orbits on the class tuples under the
/// full Galois group, or under H_D when D is nonempty. Every divisor of
/// delta contributes a factor, whatever the ranks of inv.
inline std::int64_t crystal_class_size(const InvariantTuple& inv, const std::vector<std::int64_t>& special,
                                       const Registry& registry) {
  return count_orbits(detail::class_tuple_action(inv.context, special, registry));
}

/// Lexicographically least element of each orbit counted by crystal_class_size.
inline std::vector<ProductElement> representatives_T(const InvariantTuple& inv, const std::vector<std::int64_t>& special,
                                                     const Registry& registry,
                                                     std::int64_t bound = kDefaultEnumerationBound) {
  std::vector<ProductElement> reps;
  for (auto& orbit : brute_force_orbits(detail::class_tuple_action(inv.context, special, registry), bound))
    reps.push_back(std::move(orbit.front()));
  return reps;
}

/// |H(Q(zeta_delta))|^a * (max_p |(M_1,p^*)^G|)^b with a the number of
/// divisors and b the number of prime divisors of delta.
inline BigInt genus_upper_bound(const LatticeSpec& spec, const Registry& registry) {
  const auto& ctx = spec.context;
  const std::int64_t h = registry.group(ctx.delta()).order();
  const IntMatrix a = compile_matrix(spec);
  BigInt best = 0;
  for (std::int64_t p : ctx.primes()) best = std::max(best, fixed_nonzero_count(h2(a, ctx.delta(), p)));
  return detail::ipow(h, static_cast<std::int64_t>(ctx.divisors().size())) *
         detail::ipow(best, static_cast<std::int64_t>(ctx.primes().size()));
}

namespace detail {

inline GenusReport genus_engine(const LatticeSpec& spec, const Registry& registry, const OrbitPolicy& policy,
                                bool special_formula) {
  const auto& ctx = spec.context;
  const std::int64_t delta = ctx.delta();
  const IntMatrix a = compile_matrix(spec);

  GenusReport rep;
  rep.delta = delta;
  rep.lattice = to_string(spec);
  rep.special_formula = special_formula;
  rep.x_size = 1;
  for (std::int64_t p : ctx.primes()) {
    const CohomologyResult coh = h2(a, delta, p);
    PrimeData pd;
    pd.prime = p;
    pd.census = census(a, delta, p);
    pd.h2_order = coh.group.exact_order();
    pd.fixed_nonzero = fixed_nonzero_count(coh);
    pd.special = is_exceptional(pd.census);
    if (pd.special) rep.special_primes.push_back(p);
    rep.x_size *= pd.fixed_nonzero;
    rep.primes.push_back(pd);
  }
  if (rep.x_size == 0)
    throw Error(ErrorKind::NoBieberbachGroup, "no torsion-free extension exists over " + rep.lattice);
  if (special_formula && rep.special_primes.empty())
    throw Error(ErrorKind::NotSpecial, rep.lattice + " is not exceptional at any prime of " + std::to_string(delta));

  const InvariantTuple inv = invariants_of(spec, registry);
  rep.conductors = ctx.divisors();
  rep.crystal_class_size = crystal_class_size(inv, rep.special_primes, registry);
  rep.upper_bound = genus_upper_bound(spec, registry);
  if (rep.special_primes.empty())
    rep.notes.push_back("crystal class counted under the full Galois group");
  else
    rep.notes.push_back("crystal class counted under H_D");

  const bool small_delta = in_cancellable_range(delta);
  const bool holomorph = is_regular_plus_trivial(spec);
  try {
    rep.representatives = representatives_T(inv, rep.special_primes, registry);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EnumerationBoundExceeded) throw;
    rep.representatives_enumerated = false;
    rep.notes.push_back("representatives not enumerated: class-tuple product too large");
  }

  // Per-representative terms. Without enumerated representatives only the
  // representative-independent rungs can resolve anything.
  const std::size_t n_reps = rep.representatives_enumerated ? rep.representatives.size()
                                                            : static_cast<std::size_t>(rep.crystal_class_size);
  for (const auto& [p, m] : policy.supplied) {
    if (!ctx.divides(p) || !is_prime(p))
      throw Error(ErrorKind::ValidationError, "orbit term given for p=" + std::to_string(p) + ", not a prime of " + std::to_string(delta));
    if (!m.empty() && m.rbegin()->first >= n_reps)
      throw Error(ErrorKind::ValidationError, "orbit term given for representative " + std::to_string(m.rbegin()->first) +
                                                  ", only " + std::to_string(n_reps) + " exist");
  }

  bool all_resolved = true;
  BigInt exact = 0, lower = 0, upper = 0;
  for (std::size_t r = 0; r < n_reps; ++r) {
    const bool record = rep.representatives_enumerated || r == 0;
    BigInt prod_exact = 1, prod_lo = 1, prod_hi = 1;
    for (const auto& pd : rep.primes) {
      OrbitTerm t;
      t.representative = r;
      t.prime = pd.prime;
      t.maximum = (special_formula && pd.special) ? pd.h2_order : pd.fixed_nonzero;
      if (small_delta) {
        t.source = TermSource::SmallDelta;
        t.value = 1;
      } else if (holomorph) {
        t.source = TermSource::Holomorph;
        t.value = 1;
      } else if (auto v = rep.representatives_enumerated ? policy.lookup(pd.prime, r) : std::nullopt) {
        if (*v > t.maximum)
          throw Error(ErrorKind::ValidationError,
                      "orbit count " + std::to_string(*v) + " for p=" + std::to_string(pd.prime) + ", representative " +
                          std::to_string(r) + " exceeds the " + t.maximum.str() + " elements acted on");
        t.source = TermSource::UserSupplied;
        t.value = *v;
      }
      if (t.value) {
        prod_exact *= *t.value;
        prod_lo *= *t.value;
        prod_hi *= *t.value;
      } else {
        all_resolved = false;
        prod_hi *= t.maximum;
      }
      if (record) rep.terms.push_back(t);
    }
    exact += prod_exact;
    lower += prod_lo;
    upper += prod_hi;
  }

  if (small_delta) rep.notes.push_back("orbit terms equal 1: delta is 6, 10, 14 or prime");
  else if (holomorph) rep.notes.push_back("orbit terms equal 1: the holomorph of G acts transitively on F_p^*");
  if (special_formula) rep.notes.push_back("terms at special primes range over all of H^2(C_p, M)");
  for (const auto& [p, m] : policy.supplied)
    if ((small_delta || holomorph) && !m.empty())
      rep.notes.push_back("user-supplied terms for p=" + std::to_string(p) + " superseded by an earlier criterion");

  if (all_resolved) {
    rep.genus = exact;
    rep.lower = rep.upper = exact;
  } else {
    rep.lower = lower;
    rep.upper = upper;
    rep.notes.push_back("some orbit terms unresolved: genus reported as bounds");
  }
  return rep;
}

}  // namespace detail

/// |g(Gamma)| as a sum over the representatives T of products of normalizer
/// orbit terms, each settled by the criterion ladder or left as bounds.
inline GenusReport genus_cardinality(const LatticeSpec& spec, const Registry& registry, const OrbitPolicy& policy = {}) {
  return detail::genus_engine(spec, registry, policy, false);
}

/// Variant for special groups: terms at special primes act on the whole of
/// H^2(C_p, M) rather than its nonzero fixed points.
inline GenusReport genus_special(const LatticeSpec& spec, const Registry& registry, const OrbitPolicy& policy = {}) {
  return detail::genus_engine(spec, registry, policy, true);
}

struct CharlapBounds {
  std::int64_t a = 1;
  std::int64_t b = 1;
  std::int64_t c = 1;
};

struct CharlapTuple {
  bool exceptional = false;
  std::int64_t a = 0;  ///< unused for exceptional entries
  std::int64_t b = 0;
  std::int64_t c = 0;  ///< unused for exceptional entries
  std::int64_t theta_count = 0;
  /// a(p-1) + b + cp, or b(p-1) + 1 for exceptional entries. Bookkeeping
  /// reading of the parameters, not part of the classification.
  std::int64_t dimension = 0;
};

struct CharlapResult {
  std::int64_t prime = 0;
  std::int64_t galois_orbits = 0;  ///< |Gal(zeta_p) \ H(Q(zeta_p))|
  std::int64_t inversion_orbits = 0;  ///< |C_2 \ H(Q(zeta_p))|
  std::vector<CharlapTuple> tuples;
  BigInt total = 0;
  bool dimension_filtered = false;
};

inline bool charlap_admissible(std::int64_t a, std::int64_t b, std::int64_t c) {
  return a > 0 && b >= 0 && c >= 0 && !(a == 1 && c == 0) && !(b == 0 && c == 0);
}

/// Non-exceptional (a, b, c; theta) with theta in Gal \ H, then exceptional
/// (b, theta) with b > 0 and theta in C_2 \ H, within the given bounds.
inline CharlapResult charlap_enumerate(std::int64_t p, const CharlapBounds& bounds, const Registry& registry,
                                       std::optional<std::int64_t> dimension = std::nullopt) {
  if (!is_prime(p)) throw Error(ErrorKind::OutOfRange, std::to_string(p) + " is not prime");
  if (bounds.a < 0 || bounds.b < 0 || bounds.c < 0) throw Error(ErrorKind::OutOfRange, "bounds must be nonnegative");
  const FinAbGroup& h = registry.group(p);

  auto orbits_under = [&](const std::vector<std::int64_t>& gens, const std::vector<std::int64_t>& orders) {
    GroupAction act;
    act.module = {h};
    const UnitGroup units = unit_group(p);
    for (std::size_t j = 0; j < gens.size(); ++j) {
      act.generator_actions.push_back(DiagonalAction{{restriction_action(units, gens[j], p, registry)}});
      act.generator_orders.push_back(orders[j]);
    }
    return count_orbits(act);
  };

  CharlapResult out;
  out.prime = p;
  out.dimension_filtered = dimension.has_value();
  if (p == 2) {
    out.galois_orbits = out.inversion_orbits = h.order();
  } else {
    const UnitGroup units = unit_group(p);
    out.galois_orbits = orbits_under(units.generators(), units.generator_orders());
    out.inversion_orbits = orbits_under({p - 1}, {2});
  }

  for (std::int64_t a = 1; a <= bounds.a; ++a)
    for (std::int64_t b = 0; b <= bounds.b; ++b)
      for (std::int64_t c = 0; c <= bounds.c; ++c) {
        if (!charlap_admissible(a, b, c)) continue;
        CharlapTuple t{false, a, b, c, out.galois_orbits, a * (p - 1) + b + c * p};
        if (dimension && t.dimension != *dimension) continue;
        out.total += t.theta_count;
        out.tuples.push_back(t);
      }
  for (std::int64_t b = 1; b <= bounds.b; ++b) {
    CharlapTuple t{true, 0, b, 0, out.inversion_orbits, b * (p - 1) + 1};
    if (dimension && t.dimension != *dimension) continue;
    out.total += t.theta_count;
    out.tuples.push_back(t);
  }
  return out;
}

}  // namespace bieber

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bieber/abelian.hpp"
#include "bieber/arith.hpp"
#include "bieber/classgroups.hpp"
#include "bieber/error.hpp"
#include "bieber/matrix.hpp"
#include "bieber/units.hpp"

namespace bieber {

enum class BlockKind { Trivial, Ideal, Regular };

/// One indecomposable-style summand of a catalog lattice.
///   Trivial: Z with trivial action (conductor 1)
///   Ideal:   Z[zeta_d] decorated with an ideal class from the registry
///   Regular: the group ring of the order-e cyclic quotient
struct Block {
  BlockKind kind = BlockKind::Trivial;
  std::int64_t index = 1;  ///< d for Ideal, e for Regular, 1 for Trivial
  std::optional<Coordinates> class_label;  ///< Ideal only; empty means principal

  static Block trivial() { return {}; }
  static Block ideal(std::int64_t d, std::optional<Coordinates> label = std::nullopt) {
    return {BlockKind::Ideal, d, std::move(label)};
  }
  static Block regular(std::int64_t e) { return {BlockKind::Regular, e, std::nullopt}; }

  std::int64_t rank() const {
    switch (kind) {
      case BlockKind::Trivial: return 1;
      case BlockKind::Ideal: return euler_phi(index);
      case BlockKind::Regular: return index;
    }
    return 0;
  }

  bool operator==(const Block&) const = default;
};

inline std::string to_string(const Block& b) {
  switch (b.kind) {
    case BlockKind::Trivial: return "Z";
    case BlockKind::Regular: return "R(" + std::to_string(b.index) + ")";
    case BlockKind::Ideal: {
      std::string s = "I(" + std::to_string(b.index);
      if (b.class_label) {
        s += ",";
        for (std::size_t i = 0; i < b.class_label->size(); ++i)
          s += (i ? ":" : "") + std::to_string((*b.class_label)[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

struct LatticeSpec {
  SquarefreeContext context;
  std::vector<Block> blocks;

  std::int64_t rank() const {
    std::int64_t n = 0;
    for (const auto& b : blocks) n += b.rank();
    return n;
  }

  /// Every prime of delta divides the index of some block.
  bool is_faithful() const {
    for (std::int64_t p : context.primes()) {
      const bool seen = std::any_of(blocks.begin(), blocks.end(), [p](const Block& b) {
        return b.kind != BlockKind::Trivial && b.index % p == 0;
      });
      if (!seen) return false;
    }
    return true;
  }
};

inline std::string to_string(const LatticeSpec& spec) {
  std::string s;
  for (std::size_t i = 0; i < spec.blocks.size(); ++i) s += (i ? "+" : "") + to_string(spec.blocks[i]);
  return s.empty() ? "0" : s;
}

inline LatticeSpec make_spec(const SquarefreeContext& ctx, std::vector<Block> blocks) {
  for (const auto& b : blocks) {
    if (b.kind == BlockKind::Trivial) continue;
    if (b.index <= 1) throw Error(ErrorKind::OutOfRange, to_string(b) + ": index must exceed 1");
    ctx.require_divisor(b.index);
    if (b.kind == BlockKind::Regular && b.class_label)
      throw Error(ErrorKind::ParseError, "regular blocks carry no class label");
  }
  return {ctx, std::move(blocks)};
}

/// Parses "Z", "I(d)", "I(d,label)", "R(e)" joined by '+'. A label is a
/// colon-separated coordinate tuple in the registry basis of H(Q(zeta_d)).
inline std::vector<Block> parse_blocks(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(ErrorKind::ParseError, "empty lattice description");

  auto to_int = [&](const std::string& tok) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '-'; }))
      throw Error(ErrorKind::ParseError, "bad integer '" + tok + "' in lattice description");
    try {
      return static_cast<std::int64_t>(std::stoll(tok));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad integer '" + tok + "' in lattice description");
    }
  };

  std::vector<Block> blocks;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t plus = s.find('+', pos);
    const std::string term = s.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
    if (term == "Z") {
      blocks.push_back(Block::trivial());
    } else if (term.size() > 3 && (term[0] == 'I' || term[0] == 'R') && term[1] == '(' && term.back() == ')') {
      const std::string inner = term.substr(2, term.size() - 3);
      const std::size_t comma = inner.find(',');
      const std::int64_t idx = to_int(inner.substr(0, comma));
      if (term[0] == 'R') {
        if (comma != std::string::npos) throw Error(ErrorKind::ParseError, "regular blocks carry no class label: " + term);
        blocks.push_back(Block::regular(idx));
      } else if (comma == std::string::npos) {
        blocks.push_back(Block::ideal(idx));
      } else {
        Coordinates label;
        std::string rest = inner.substr(comma + 1);
        if (rest.empty()) throw Error(ErrorKind::ParseError, "empty class label in " + term);
        std::size_t p0 = 0;
        while (true) {
          const std::size_t colon = rest.find(':', p0);
          label.push_back(to_int(rest.substr(p0, colon == std::string::npos ? std::string::npos : colon - p0)));
          if (colon == std::string::npos) break;
          p0 = colon + 1;
        }
        blocks.push_back(Block::ideal(idx, std::move(label)));
      }
    } else {
      throw Error(ErrorKind::ParseError, "unrecognized lattice term '" + term + "'");
    }
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
  return blocks;
}

inline LatticeSpec parse_lattice(const std::string& text, const SquarefreeContext& ctx) {
  return make_spec(ctx, parse_blocks(text));
}

/// Smallest delta on which the blocks act faithfully: lcm of block indices.
inline std::int64_t infer_delta(const std::vector<Block>& blocks) {
  std::int64_t delta = 1;
  for (const auto& b : blocks)
    if (b.kind != BlockKind::Trivial) {
      if (b.index <= 1) throw Error(ErrorKind::OutOfRange, to_string(b) + ": index must exceed 1");
      delta = std::lcm(delta, b.index);
    }
  return delta;
}

/// Parses with delta taken from the blocks themselves when none is given.
inline LatticeSpec parse_lattice(const std::string& text, std::optional<std::int64_t> delta = std::nullopt) {
  auto blocks = parse_blocks(text);
  const std::int64_t d = delta ? *delta : infer_delta(blocks);
  if (d <= 1) throw Error(ErrorKind::NotFaithful, "'" + text + "' has no nontrivial block to fix delta");
  return make_spec(build_context(d), std::move(blocks));
}

/// Element of H(Q(zeta_d)) carried with its group.
struct ClassElement {
  FinAbGroup group;
  Coordinates value;

  bool is_identity() const { return value == group.zero(); }
  bool operator==(const ClassElement&) const = default;
};

/// Oppenheim invariants: ranks r(d), products of ideal classes, and the
/// rho vectors of the gluing data on each prime-ratio pair.
struct InvariantTuple {
  SquarefreeContext context;
  std::map<std::int64_t, std::int64_t> r;
  std::map<std::int64_t, ClassElement> classes;
  std::map<PrimeRatioPair, std::vector<std::int64_t>> rho;

  std::int64_t r_of(std::int64_t d) const {
    auto it = r.find(d);
    return it == r.end() ? 0 : it->second;
  }
  std::vector<std::int64_t> rho_of(const PrimeRatioPair& pair) const {
    auto it = rho.find(pair);
    return it == rho.end() ? std::vector<std::int64_t>(static_cast<std::size_t>(compute_v(pair)), 0) : it->second;
  }
  std::int64_t rank() const {
    std::int64_t n = 0;
    for (const auto& [d, k] : r) n += k * euler_phi(d);
    return n;
  }
};

/// The zero lattice over a context.
inline InvariantTuple zero_invariants(const SquarefreeContext& ctx) { return InvariantTuple{ctx, {}, {}, {}}; }

namespace detail {

inline void require_same_context(const InvariantTuple& a, const InvariantTuple& b) {
  if (!(a.context == b.context))
    throw Error(ErrorKind::ContextMismatch,
                "delta " + std::to_string(a.context.delta()) + " vs " + std::to_string(b.context.delta()));
}

inline void add_class(InvariantTuple& inv, std::int64_t d, const ClassElement& c) {
  auto it = inv.classes.find(d);
  if (it == inv.classes.end()) {
    inv.classes.emplace(d, c);
    return;
  }
  if (!(it->second.group == c.group))
    throw Error(ErrorKind::ContextMismatch, "class groups for conductor " + std::to_string(d) + " differ");
  it->second.value = c.group.add(it->second.value, c.value);
}

inline ClassElement class_of(const Block& b, const Registry& registry) {
  const std::int64_t d = b.kind == BlockKind::Ideal ? b.index : 1;
  if (!registry.contains(d)) {
    if (b.class_label)
      throw Error(ErrorKind::UnknownClassLabel, to_string(b) + ": no registry record for conductor " + std::to_string(d));
    throw Error(ErrorKind::MissingConductor, "no class group record for conductor " + std::to_string(d));
  }
  const FinAbGroup& g = registry.group(d);
  if (!b.class_label) return {g, g.zero()};
  if (!g.contains(*b.class_label))
    throw Error(ErrorKind::UnknownClassLabel, to_string(b) + " is not an element of the registry group for conductor " + std::to_string(d));
  return {g, *b.class_label};
}

}  // namespace detail

/// Invariant tuple of a catalog lattice. Regular blocks glue maximally: they
/// add one to every coordinate of rho on each pair inside their divisor.
inline InvariantTuple invariants_of(const LatticeSpec& spec, const Registry& registry) {
  InvariantTuple inv = zero_invariants(spec.context);
  for (const auto& b : spec.blocks) {
    switch (b.kind) {
      case BlockKind::Trivial:
      case BlockKind::Ideal: {
        const std::int64_t d = b.kind == BlockKind::Ideal ? b.index : 1;
        inv.r[d] += 1;
        detail::add_class(inv, d, detail::class_of(b, registry));
        break;
      }
      case BlockKind::Regular:
        for (std::int64_t d : divisors_of(b.index)) {
          inv.r[d] += 1;
          detail::add_class(inv, d, detail::class_of(d == 1 ? Block::trivial() : Block::ideal(d), registry));
        }
        for (const auto& pair : spec.context.prime_ratio_pairs()) {
          if (b.index % pair.s != 0 || b.index % pair.t != 0) continue;
          auto& v = inv.rho[pair];
          v.resize(static_cast<std::size_t>(compute_v(pair)), 0);
          for (auto& x : v) x += 1;
        }
        break;
    }
  }
  return inv;
}

inline InvariantTuple direct_sum(const InvariantTuple& a, const InvariantTuple& b) {
  detail::require_same_context(a, b);
  InvariantTuple out = a;
  for (const auto& [d, k] : b.r) out.r[d] += k;
  for (const auto& [d, c] : b.classes) detail::add_class(out, d, c);
  for (const auto& [pair, v] : b.rho) {
    auto& w = out.rho[pair];
    w.resize(std::max(w.size(), v.size()), 0);
    for (std::size_t k = 0; k < v.size(); ++k) w[k] += v[k];
  }
  return out;
}

/// Agreement of all r(d) and all rho vectors; classes are not consulted.
inline bool profinitely_isomorphic(const InvariantTuple& a, const InvariantTuple& b) {
  detail::require_same_context(a, b);
  for (std::int64_t d : a.context.divisors())
    if (a.r_of(d) != b.r_of(d)) return false;
  for (const auto& pair : a.context.prime_ratio_pairs())
    if (a.rho_of(pair) != b.rho_of(pair)) return false;
  return true;
}

/// A unit sigma mod delta carrying every class of a onto the class of b,
/// when a and b are profinitely isomorphic.
inline std::optional<std::int64_t> semilinear_witness(const InvariantTuple& a, const InvariantTuple& b,
                                                      const Registry& registry) {
  if (!profinitely_isomorphic(a, b)) return std::nullopt;
  std::vector<std::int64_t> ds;
  for (std::int64_t d : a.context.divisors())
    if (a.r_of(d) > 0) ds.push_back(d);

  auto class_or_identity = [&](const InvariantTuple& t, std::int64_t d) {
    auto it = t.classes.find(d);
    if (it != t.classes.end()) return it->second.value;
    return registry.group(d).zero();
  };
  std::vector<Coordinates> from, to;
  for (std::int64_t d : ds) {
    from.push_back(class_or_identity(a, d));
    to.push_back(class_or_identity(b, d));
  }
  if (from == to) return 1;

  const UnitGroup units = unit_group(a.context.delta());
  for (std::int64_t u : units.elements()) {
    bool ok = true;
    for (std::size_t i = 0; i < ds.size() && ok; ++i)
      ok = restriction_action(units, u, ds[i], registry).apply(from[i]) == to[i];
    if (ok) return u;
  }
  return std::nullopt;
}

inline bool semilinearly_isomorphic(const InvariantTuple& a, const InvariantTuple& b, const Registry& registry) {
  return semilinear_witness(a, b, registry).has_value();
}

enum class Decision { False, True, Undecidable };

inline std::string to_string(Decision d) {
  switch (d) {
    case Decision::False: return "false";
    case Decision::True: return "true";
    case Decision::Undecidable: return "undecidable";
  }
  return "?";
}

/// Cancellation holds only for delta in {6, 10, 14} or delta prime; there
/// the semilinear test decides. Elsewhere the invariants do not.
inline bool in_cancellable_range(std::int64_t delta) {
  return delta == 6 || delta == 10 || delta == 14 || is_prime(delta);
}

inline Decision linearly_isomorphic(const InvariantTuple& a, const InvariantTuple& b, const Registry& registry) {
  detail::require_same_context(a, b);
  if (!in_cancellable_range(a.context.delta())) return Decision::Undecidable;
  return semilinearly_isomorphic(a, b, registry) ? Decision::True : Decision::False;
}

/// Companion matrix of a monic polynomial: x^k -> -(c_0 + ... + c_{k-1} x^{k-1}).
inline IntMatrix companion_matrix(const IntPolynomial& f) {
  const auto k = static_cast<std::size_t>(f.degree());
  IntMatrix m(k, k);
  for (std::size_t i = 1; i < k; ++i) m(i, i - 1) = 1;
  for (std::size_t i = 0; i < k; ++i) m(i, k - 1) = -f.coeff(i);
  return m;
}

/// e x e permutation matrix of the cyclic shift e_i -> e_{i+1}.
inline IntMatrix cyclic_shift(std::int64_t e) {
  const auto n = static_cast<std::size_t>(e);
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m((i + 1) % n, i) = 1;
  return m;
}

/// Matrix of the holonomy generator. Ideal classes all compile to the
/// principal companion matrix; H^2 and fixed points only see the p-adic
/// completion, which does not depend on the class.
inline IntMatrix compile_matrix(const LatticeSpec& spec) {
  if (spec.blocks.empty() || !spec.is_faithful())
    throw Error(ErrorKind::NotFaithful, "'" + to_string(spec) + "' is not faithful for delta " + std::to_string(spec.context.delta()));
  std::vector<IntMatrix> parts;
  for (const auto& b : spec.blocks) {
    switch (b.kind) {
      case BlockKind::Trivial: parts.push_back(IntMatrix::identity(1)); break;
      case BlockKind::Ideal: parts.push_back(companion_matrix(cyclotomic_poly(b.index))); break;
      case BlockKind::Regular: parts.push_back(cyclic_shift(b.index)); break;
    }
  }
  return block_diagonal(parts);
}

}  // namespace bieber

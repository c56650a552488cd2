#pragma once

// Independent reference computations used only by the tests. They are
// deliberately naive: enumeration, rational elimination, literature tables.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bieber/bieber.hpp"
#include "bieber/cli.hpp"

namespace oracle {

using bieber::BigInt;
using bieber::Rational;

inline std::int64_t phi(std::int64_t n) {
  std::int64_t c = 0;
  for (std::int64_t a = 1; a <= n; ++a)
    if (std::gcd(a, n) == 1) ++c;
  return c;
}

inline std::int64_t order(std::int64_t a, std::int64_t m) {
  std::int64_t x = a % m, e = 1;
  while (x != 1 % m) {
    x = x * a % m;
    ++e;
  }
  return e;
}

/// Number of irreducible factors of Phi_m over F_p (p not dividing m):
/// the orbits of x -> p x on (Z/m)^x, found by walking them.
inline std::int64_t cyclotomic_factor_count(std::int64_t m, std::int64_t p) {
  std::set<std::int64_t> seen;
  std::int64_t orbits = 0;
  for (std::int64_t a = 1; a < std::max<std::int64_t>(m, 2); ++a) {
    if (std::gcd(a, m) != 1 || seen.count(a)) continue;
    ++orbits;
    for (std::int64_t x = a; !seen.count(x); x = x * p % m) seen.insert(x);
  }
  return orbits;
}

/// Exact determinant by rational elimination.
inline Rational determinant(const bieber::BigMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = Rational(a(i, j));
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

/// Rank over Q by rational elimination.
inline std::size_t rational_rank(const bieber::IntMatrix& a) {
  std::vector<std::vector<Rational>> m(a.rows(), std::vector<Rational>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = Rational(a(i, j));
  std::size_t rank = 0;
  for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < a.rows() && m[piv][c] == 0) ++piv;
    if (piv == a.rows()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < a.cols(); ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// All elements of a FinAbGroup by nested counting.
inline std::vector<bieber::Coordinates> elements(const bieber::FinAbGroup& g) {
  std::vector<bieber::Coordinates> out(1);
  for (auto d : g.invariant_factors()) {
    std::vector<bieber::Coordinates> next;
    for (const auto& x : out)
      for (std::int64_t v = 0; v < d; ++v) {
        auto y = x;
        y.push_back(v);
        next.push_back(y);
      }
    out = next;
  }
  return out;
}

/// Applies a matrix to coordinates by schoolbook multiplication.
inline bieber::Coordinates apply_action(const bieber::ActionMatrix& a, const bieber::Coordinates& x) {
  const auto& g = a.group();
  bieber::Coordinates y(g.rank(), 0);
  for (std::size_t i = 0; i < g.rank(); ++i) {
    BigInt acc = 0;
    for (std::size_t j = 0; j < g.rank(); ++j) acc += BigInt(a.matrix()(i, j)) * x[j];
    acc %= g.modulus(i);
    if (acc < 0) acc += g.modulus(i);
    y[i] = acc.convert_to<std::int64_t>();
  }
  return y;
}

inline std::int64_t fixed_points(const bieber::ActionMatrix& a) {
  std::int64_t c = 0;
  for (const auto& x : elements(a.group()))
    if (apply_action(a, x) == x) ++c;
  return c;
}

/// Orbits by union-find over every element of the acting group, each one
/// built as an explicit word in the generators.
inline std::int64_t orbit_count(const bieber::GroupAction& act) {
  std::vector<std::vector<bieber::Coordinates>> factor_elements;
  for (const auto& g : act.module) factor_elements.push_back(elements(g));
  std::vector<bieber::ProductElement> all(1);
  for (const auto& fe : factor_elements) {
    std::vector<bieber::ProductElement> next;
    for (const auto& x : all)
      for (const auto& y : fe) {
        auto z = x;
        z.push_back(y);
        next.push_back(z);
      }
    all = next;
  }
  std::map<bieber::ProductElement, std::size_t> index;
  for (std::size_t i = 0; i < all.size(); ++i) index[all[i]] = i;
  std::vector<std::size_t> parent(all.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  std::vector<std::vector<std::int64_t>> words(1);
  for (auto o : act.generator_orders) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& w : words)
      for (std::int64_t e = 0; e < o; ++e) {
        auto v = w;
        v.push_back(e);
        next.push_back(v);
      }
    words = next;
  }
  for (const auto& w : words)
    for (std::size_t i = 0; i < all.size(); ++i) {
      bieber::ProductElement y = all[i];
      for (std::size_t j = 0; j < w.size(); ++j)
        for (std::int64_t k = 0; k < w[j]; ++k)
          for (std::size_t f = 0; f < y.size(); ++f) y[f] = apply_action(act.generator_actions[j].factors[f], y[f]);
      parent[find(i)] = find(index.at(y));
    }
  std::int64_t roots = 0;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (find(i) == i) ++roots;
  return roots;
}

/// h^-(p) for primes p <= 67 (Washington, Introduction to Cyclotomic
/// Fields, table of relative class numbers).
inline const std::map<std::int64_t, std::int64_t>& minus_class_numbers() {
  static const std::map<std::int64_t, std::int64_t> table = {
      {3, 1},  {5, 1},  {7, 1},   {11, 1},  {13, 1},  {17, 1},    {19, 1},     {23, 3},
      {29, 8}, {31, 9}, {37, 37}, {41, 121}, {43, 211}, {47, 695}, {53, 4889}, {59, 41241},
      {61, 76301}, {67, 853513}};
  return table;
}

/// b_p read off block by block: Z counts 1, and blocks whose index is prime
/// to p restrict to trivial C_p-modules of full rank.
inline std::int64_t expected_b(const bieber::LatticeSpec& spec, std::int64_t p) {
  std::int64_t b = 0;
  for (const auto& blk : spec.blocks) {
    if (blk.kind == bieber::BlockKind::Trivial) b += 1;
    else if (blk.index % p != 0) b += blk.rank();
  }
  return b;
}

/// Fixed dimension of the induced action at p: the blocks of conductor one
/// after restriction mod p, i.e. Z plus one per regular block prime to p.
inline std::int64_t expected_fixed_dim(const bieber::LatticeSpec& spec, std::int64_t p) {
  std::int64_t t = 0;
  for (const auto& blk : spec.blocks) {
    if (blk.kind == bieber::BlockKind::Trivial) t += 1;
    else if (blk.kind == bieber::BlockKind::Regular && blk.index % p != 0) t += 1;
  }
  return t;
}

/// Random faithful catalog lattice of rank at most max_rank.
inline bieber::LatticeSpec random_spec(std::mt19937_64& rng, const bieber::SquarefreeContext& ctx,
                                       std::int64_t max_rank = 40, bool with_trivial = true) {
  std::vector<std::int64_t> divs;
  for (auto d : ctx.divisors())
    if (d > 1) divs.push_back(d);
  while (true) {
    std::vector<bieber::Block> blocks;
    std::uniform_int_distribution<int> kind(0, 2), count(1, 4);
    std::uniform_int_distribution<std::size_t> pick(0, divs.size() - 1);
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      switch (kind(rng)) {
        case 0: blocks.push_back(bieber::Block::trivial()); break;
        case 1: blocks.push_back(bieber::Block::ideal(divs[pick(rng)])); break;
        default: blocks.push_back(bieber::Block::regular(divs[pick(rng)])); break;
      }
    }
    if (with_trivial) blocks.push_back(bieber::Block::trivial());
    auto spec = bieber::make_spec(ctx, blocks);
    if (spec.is_faithful() && spec.rank() <= max_rank) return spec;
  }
}

inline const bieber::Registry& registry() {
  return bieber::cli::bundled_registry();
}

}  // namespace oracle

namespace oracle {

inline bieber::FinAbGroup random_group(std::mt19937_64& rng, std::int64_t max_order) {
  static const std::vector<std::vector<std::int64_t>> shapes = {
      {},        {2},       {3},       {5},       {7},        {12},      {2, 2},    {3, 3},  {2, 4},
      {2, 6},    {3, 9},    {4, 8},    {5, 5},    {2, 2, 2},  {2, 2, 4}, {3, 3, 3}, {6, 12}, {10},
      {13},      {30},      {2, 10},   {7, 7},    {2, 2, 6},  {4, 4},    {9},       {8},     {3, 6}};
  while (true) {
    std::uniform_int_distribution<std::size_t> pick(0, shapes.size() - 1);
    bieber::FinAbGroup g(shapes[pick(rng)]);
    if (g.order() <= max_order) return g;
  }
}

inline bieber::ActionMatrix random_automorphism(std::mt19937_64& rng, const bieber::FinAbGroup& g) {
  const std::size_t r = g.rank();
  std::uniform_int_distribution<std::int64_t> entry(-20, 20);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    bieber::IntMatrix m(r, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        const std::int64_t di = g.modulus(i), dj = g.modulus(j);
        m(i, j) = entry(rng) * (di / std::gcd(di, dj));
      }
    bieber::ActionMatrix a(g, m);
    if (a.is_automorphism()) return a;
  }
  return bieber::ActionMatrix::identity(g);
}

/// A valid abelian group action: a random automorphism on every factor and
/// a scalar unit multiplication, which commutes with it.
inline bieber::GroupAction random_group_action(std::mt19937_64& rng, std::int64_t max_module_order = 10'000,
                                               std::int64_t max_acting_order = 2'000) {
  while (true) {
    bieber::GroupAction act;
    std::uniform_int_distribution<int> factors(1, 3);
    const int nf = factors(rng);
    std::int64_t total = 1;
    for (int f = 0; f < nf; ++f) {
      auto g = random_group(rng, max_module_order / total);
      total *= g.order();
      act.module.push_back(g);
    }
    bieber::DiagonalAction auto_gen, scalar_gen;
    std::int64_t o1 = 1, o2 = 1;
    std::int64_t exponent = 1;
    for (const auto& g : act.module) exponent = std::lcm(exponent, g.exponent());
    std::vector<std::int64_t> units;
    for (std::int64_t k = 1; k <= std::max<std::int64_t>(exponent, 1); ++k)
      if (std::gcd(k, exponent) == 1) units.push_back(k);
    std::uniform_int_distribution<std::size_t> pick(0, units.size() - 1);
    const std::int64_t k = units[pick(rng)];
    for (const auto& g : act.module) {
      auto a = random_automorphism(rng, g);
      o1 = std::lcm(o1, a.order());
      auto s = bieber::ActionMatrix::scalar(g, k);
      o2 = std::lcm(o2, s.order());
      auto_gen.factors.push_back(a);
      scalar_gen.factors.push_back(s);
    }
    act.generator_actions = {auto_gen, scalar_gen};
    act.generator_orders = {o1, o2};
    if (act.acting_order() <= max_acting_order) return act;
  }
}

}  // namespace oracle

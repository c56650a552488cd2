#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace bieber;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Overflow;
}

IntMatrix holonomy(const std::string& text, std::int64_t delta) { return compile_matrix(parse_lattice(text, delta)); }

// Census predicted from the blocks alone.
BlockCensus expected_census(const LatticeSpec& spec, std::int64_t p) {
  BlockCensus c{p, 0, oracle::expected_b(spec, p), 0};
  for (const auto& b : spec.blocks) {
    if (b.kind == BlockKind::Trivial || b.index % p != 0) continue;
    if (b.kind == BlockKind::Ideal) c.a_p += oracle::phi(b.index) / (p - 1);
    else c.c_p += b.index / p;
  }
  return c;
}

std::int64_t ipow(std::int64_t b, std::int64_t e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

TEST(H2, SingleBlocks) {
  for (std::int64_t p : {2, 3, 5, 7}) {
    for (std::int64_t m : {1, 2, 3, 5, 6, 7, 10, 14, 15}) {
      const std::int64_t delta = std::lcm(p, m);
      // the extra block keeps the lattice faithful without touching H^2 at p
      const std::string tail = "+I(" + std::to_string(p) + ")";
      const std::string blocks[] = {"Z", "I(" + std::to_string(m) + ")", "R(" + std::to_string(m) + ")"};
      for (const auto& blk : blocks) {
        if (m == 1 && blk != "Z") continue;
        const std::int64_t n = blk == "Z" ? p : delta;
        const auto spec = parse_lattice(blk + tail, n);
        const auto coh = h2(compile_matrix(spec), n, p);
        std::int64_t want = 0;
        if (blk == "Z") want = 1;
        else if (m % p != 0) want = blk[0] == 'I' ? oracle::phi(m) : m;
        EXPECT_EQ(coh.b_p, want) << blk << " p=" << p;
        EXPECT_EQ(coh.group.order(), ipow(p, want));
        for (auto inv : coh.group.invariant_factors()) EXPECT_EQ(inv, p);
      }
    }
  }
}

TEST(H2, ActionOnClasses) {
  const auto coh = h2(holonomy("R(2)+I(3)", 6), 6, 3);
  EXPECT_EQ(coh.b_p, 2);
  EXPECT_EQ(oracle::fixed_points(coh.g_action), 3);
  EXPECT_EQ(fixed_nonzero_count(coh), 2);
  const auto at2 = h2(holonomy("R(2)+I(3)", 6), 6, 2);
  EXPECT_EQ(fixed_nonzero_count(at2), 0);
  EXPECT_EQ(fixed_nonzero_count(h2(holonomy("I(23)", 23), 23, 23)), 0);
}

TEST(H2, Errors) {
  const auto a = holonomy("I(23)+Z", 23);
  EXPECT_EQ(kind_of([&] { h2(a, 23, 5); }), ErrorKind::PrimeNotInModulus);
  EXPECT_EQ(kind_of([&] { h2(a, 46, 3); }), ErrorKind::PrimeNotInModulus);
  EXPECT_EQ(kind_of([&] { h2(holonomy("R(6)+Z", 6), 3, 3); }), ErrorKind::OrderMismatch);
}

TEST(H2, Additivity) {
  std::mt19937_64 rng(21);
  for (std::int64_t delta : {6, 10, 15, 21, 30, 35, 42}) {
    const auto ctx = build_context(delta);
    for (int t = 0; t < 8; ++t) {
      const auto s1 = oracle::random_spec(rng, ctx, 30);
      const auto s2 = oracle::random_spec(rng, ctx, 30);
      auto joined = s1.blocks;
      joined.insert(joined.end(), s2.blocks.begin(), s2.blocks.end());
      const auto a = compile_matrix(make_spec(ctx, joined));
      for (auto p : ctx.primes()) {
        const auto whole = h2(a, delta, p);
        const auto c1 = census(compile_matrix(s1), delta, p), c2 = census(compile_matrix(s2), delta, p);
        const auto c = census(a, delta, p);
        ASSERT_EQ(whole.b_p, h2(compile_matrix(s1), delta, p).b_p + h2(compile_matrix(s2), delta, p).b_p);
        ASSERT_EQ(c.a_p, c1.a_p + c2.a_p);
        ASSERT_EQ(c.c_p, c1.c_p + c2.c_p);
      }
    }
  }
}

TEST(Census, Examples) {
  EXPECT_EQ(census(holonomy("R(23)+Z", 23), 23, 23), (BlockCensus{23, 0, 1, 1}));
  EXPECT_EQ(census(holonomy("I(23)+Z", 23), 23, 23), (BlockCensus{23, 1, 1, 0}));
  EXPECT_EQ(census(holonomy("I(23)+I(23)+I(23)+Z", 23), 23, 23), (BlockCensus{23, 3, 1, 0}));
  EXPECT_EQ(census(holonomy("R(6)+Z", 6), 6, 2), (BlockCensus{2, 0, 1, 3}));
  EXPECT_TRUE(is_exceptional(BlockCensus{23, 1, 1, 0}));
  EXPECT_FALSE(is_exceptional(BlockCensus{23, 0, 1, 1}));
  EXPECT_FALSE(is_exceptional(BlockCensus{23, 1, 2, 0}));
  EXPECT_TRUE(is_exceptional_at(holonomy("I(23)+I(46)+Z", 46), 46, 23));
  EXPECT_FALSE(is_exceptional_at(holonomy("I(23)+I(46)+Z", 46), 46, 2));
}

TEST(Census, SpecialPrimes) {
  EXPECT_EQ(special_primes(holonomy("I(23)+Z", 23), build_context(23)), std::vector<std::int64_t>{23});
  EXPECT_TRUE(special_primes(holonomy("R(23)+Z", 23), build_context(23)).empty());
  EXPECT_EQ(special_primes(holonomy("I(15)+Z", 15), build_context(15)), (std::vector<std::int64_t>{3, 5}));
  EXPECT_TRUE(special_primes(holonomy("I(15)+I(3)+I(5)+Z", 15), build_context(15)).empty());
  EXPECT_TRUE(special_primes(holonomy("R(15)+Z", 15), build_context(15)).empty());
}

TEST(Census, MatchesBlockFormula) {
  std::mt19937_64 rng(4);
  for (std::int64_t delta : {2, 3, 5, 6, 7, 10, 11, 14, 15, 21, 23, 30, 46, 55}) {
    const auto ctx = build_context(delta);
    for (int t = 0; t < 10; ++t) {
      const auto spec = oracle::random_spec(rng, ctx, 60);
      const auto a = compile_matrix(spec);
      for (auto p : ctx.primes()) {
        const auto c = census(a, delta, p);
        ASSERT_EQ(c, expected_census(spec, p)) << to_string(spec) << " p=" << p;
        ASSERT_EQ(c.a_p * (p - 1) + c.b_p + p * c.c_p, spec.rank());
        const auto coh = h2(a, delta, p);
        ASSERT_EQ(coh.fixed_rank, static_cast<std::int64_t>(oracle::rational_rank(IntMatrix::identity(a.rows()))) -
                                       static_cast<std::int64_t>(oracle::rational_rank(
                                           matrix_power(a, static_cast<std::uint64_t>(delta / p)) - IntMatrix::identity(a.rows()))));
        const std::int64_t t_dim = oracle::expected_fixed_dim(spec, p);
        ASSERT_EQ(fixed_nonzero_count(coh), coh.b_p == 0 ? 0 : ipow(p, t_dim) - 1) << to_string(spec) << " p=" << p;
      }
    }
  }
}

TEST(FixedPoints, BruteForce) {
  std::mt19937_64 rng(9);
  int checked = 0;
  for (std::int64_t delta : {6, 10, 15, 21, 30}) {
    const auto ctx = build_context(delta);
    for (int t = 0; t < 20; ++t) {
      const auto spec = oracle::random_spec(rng, ctx, 24);
      for (auto p : ctx.primes()) {
        const auto coh = h2(compile_matrix(spec), delta, p);
        if (coh.group.order() > 729) continue;
        const std::int64_t fixed = oracle::fixed_points(coh.g_action);
        ASSERT_EQ(fixed_nonzero_count(coh), coh.b_p == 0 ? 0 : fixed - 1);
        ASSERT_EQ(coh.g_action.power(static_cast<std::uint64_t>(delta)), ActionMatrix::identity(coh.group));
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(XSize, Examples) {
  EXPECT_EQ(x_size(holonomy("R(6)+Z", 6), build_context(6)), 2);
  EXPECT_EQ(x_size(holonomy("R(15)+Z", 15), build_context(15)), 4 * 2);
  EXPECT_EQ(x_size(holonomy("I(23)", 23), build_context(23)), 0);
  EXPECT_EQ(x_size(holonomy("I(23)+Z", 23), build_context(23)), 22);
  EXPECT_EQ(x_size(holonomy("R(2)+I(3)", 6), build_context(6)), 0);
}

TEST(XSize, RegularBlocksKillH2) {
  for (std::int64_t e : {2, 3, 6, 10, 15, 30}) {
    const auto a = holonomy("R(" + std::to_string(e) + ")", e);
    const auto ctx = build_context(e);
    for (auto p : ctx.primes()) EXPECT_TRUE(h2(a, e, p).group.is_trivial());
  }
}

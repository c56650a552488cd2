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

ClassGroupRecord record23(std::vector<std::int64_t> invariants, std::int64_t image, std::optional<std::int64_t> plus = 1) {
  ClassGroupRecord r;
  r.conductor = 23;
  r.group = FinAbGroup(std::move(invariants));
  IntMatrix m(r.group.rank(), r.group.rank());
  for (std::size_t i = 0; i < r.group.rank(); ++i) m(i, i) = image;
  r.generator_actions.push_back({5, ActionMatrix(r.group, m)});
  r.plus_part_order = plus;
  return r;
}

const char* kSmall = R"(# two records
conductor 1
invariants
plus_part 1
provenance "trivial"
end

conductor 23
invariants 3
plus_part 1
gen 5 matrix 2
provenance "test"
end
)";

}  // namespace

TEST(Registry, LoadsSmallDocument) {
  const auto reg = load_registry(kSmall);
  EXPECT_EQ(reg.size(), 2U);
  EXPECT_TRUE(reg.group(1).is_trivial());
  EXPECT_EQ(reg.group(23).order(), 3);
  EXPECT_TRUE(reg.report(23).certified);
  EXPECT_EQ(reg.record(23).provenance, "test");
}

TEST(Registry, Rejections) {
  EXPECT_EQ(kind_of([] { load_registry(std::string(kSmall) + "conductor 23\ninvariants 3\nplus_part 1\ngen 5 matrix 2\nprovenance \"x\"\nend\n"); }),
            ErrorKind::DuplicateConductor);
  EXPECT_EQ(kind_of([] { load_registry("conductor 23\ninvariants 3\nplus_part 1\ngen 5 matrix 0\nprovenance \"x\"\nend\n"); }),
            ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { load_registry("conductor 23\ninvariants 3\nplus_part 1\ngen 5 matrix 2 2\nprovenance \"x\"\nend\n"); }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { load_registry("conductor x\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { load_registry("conductor 5\ninvariants\nplus_part 1\nprovenance \"x\"\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { load_registry("invariants 3\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { load_registry("conductor 7\ninvariants 2 3\nplus_part 1\nprovenance \"x\"\nend\n"); }), ErrorKind::ParseError);
}

TEST(Registry, ParseErrorNamesTheLine) {
  try {
    load_registry("conductor 1\ninvariants\nplus_part maybe\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Registry, UnknownPlusPartIsUncertified) {
  auto r = record23({3}, 2, std::nullopt);
  const auto rep = validate_record(r);
  EXPECT_TRUE(rep.valid);
  EXPECT_FALSE(rep.certified);
}

TEST(Validate, Conductor19Trivial) {
  ClassGroupRecord r;
  r.conductor = 19;
  r.generator_actions.push_back({2, ActionMatrix::identity(r.group)});
  r.plus_part_order = 1;
  const auto rep = validate_record(r);
  EXPECT_TRUE(rep.valid);
  EXPECT_TRUE(rep.certified);
  EXPECT_EQ(rep.minus_class_number, BigInt(1));
}

TEST(Validate, Conductor23) {
  EXPECT_TRUE(validate_record(record23({3}, 2)).valid);
  // -1 = 5^11 would act trivially
  const auto not_inversion = validate_record(record23({3}, 1));
  EXPECT_FALSE(not_inversion.valid);
  const auto wrong_order = validate_record(record23({5}, 4));
  EXPECT_FALSE(wrong_order.valid);
  ASSERT_FALSE(wrong_order.problems.empty());
  EXPECT_NE(wrong_order.problems.front().find("h^-(23) = 3"), std::string::npos);
  EXPECT_FALSE(validate_record(record23({3}, 0)).valid);
}

TEST(Validate, GeneratorsMustGenerate) {
  auto r = record23({3}, 2);
  r.generator_actions.front().unit = 4;  // 4 = 2^2 has order 11
  r.generator_actions.front().action = ActionMatrix::identity(r.group);
  const auto rep = validate_record(r);
  EXPECT_FALSE(rep.valid);
}

TEST(Validate, NonCommutingRejected) {
  ClassGroupRecord r;
  r.conductor = 15;
  r.group = FinAbGroup({3, 3});
  r.generator_actions.push_back({7, ActionMatrix(r.group, IntMatrix::from_rows({{0, 1}, {1, 0}}))});
  r.generator_actions.push_back({11, ActionMatrix(r.group, IntMatrix::from_rows({{1, 0}, {0, 2}}))});
  const auto rep = validate_record(r);
  EXPECT_FALSE(rep.valid);
}

TEST(MinusClassNumber, NamedConductors) {
  for (std::int64_t delta : {6, 10, 14, 15, 21, 2, 3, 5, 7, 11, 13, 17, 19})
    for (auto d : divisors_of(delta))
      if (d >= 3) {
        EXPECT_EQ(minus_class_number(d), 1) << d;
      }
  EXPECT_EQ(minus_class_number(23), 3);
  EXPECT_EQ(minus_class_number(46), 3);
  EXPECT_EQ(minus_class_number(55), 10);
  EXPECT_EQ(minus_class_number(105), 13);
}

TEST(MinusClassNumber, LiteratureTable) {
  for (const auto& [p, h] : oracle::minus_class_numbers()) EXPECT_EQ(minus_class_number(p), h) << p;
}

TEST(MinusClassNumber, Errors) {
  EXPECT_EQ(kind_of([] { minus_class_number(2); }), ErrorKind::OutOfRange);
  EXPECT_EQ(kind_of([] { minus_class_number(211); }), ErrorKind::BoundExceeded);
  EXPECT_EQ(kind_of([] { minus_class_number(47, 46); }), ErrorKind::BoundExceeded);
  EXPECT_EQ(minus_class_number(47, 47), 695);
}

TEST(MinusClassNumber, EqualForOddAndTwiceOdd) {
  for (std::int64_t d = 3; d <= 45; d += 2) EXPECT_EQ(minus_class_number(d), minus_class_number(2 * d, 210)) << d;
}

TEST(Characters, Multiplicative) {
  for (std::int64_t m : {7, 15, 20, 21, 24, 35}) {
    const auto chars = enumerate_characters(m);
    EXPECT_EQ(static_cast<std::int64_t>(chars.size()), euler_phi(m));
    for (const auto& chi : chars) {
      ASSERT_EQ(euler_phi(m) % chi.order, 0);
      for (const auto& [a, ea] : chi.value_exponents)
        for (const auto& [b, eb] : chi.value_exponents)
          ASSERT_EQ(chi.value_exponent(a * b % m), (ea + eb) % chi.order);
    }
  }
}

TEST(Characters, ParityCount) {
  for (std::int64_t m : {5, 12, 23, 105}) {
    std::int64_t odd = 0;
    for (const auto& chi : enumerate_characters(m)) odd += chi.parity == Parity::Odd;
    EXPECT_EQ(odd, euler_phi(m) / 2);
  }
}

TEST(Restriction, Examples) {
  const auto& reg = oracle::registry();
  const auto u46 = unit_group(46);
  EXPECT_TRUE(restriction_action(u46, 47 % 46, 23, reg).is_identity());
  EXPECT_TRUE(restriction_action(u46, 45, 23, reg).is_inversion());
  EXPECT_TRUE(restriction_action(u46, 45, 1, reg).is_identity());
  EXPECT_EQ(kind_of([&] { restriction_action(unit_group(58), 3, 29, reg); }), ErrorKind::MissingConductor);
  EXPECT_EQ(kind_of([&] { restriction_action(u46, 2, 23, reg); }), ErrorKind::NotCoprime);
}

TEST(Restriction, Homomorphism) {
  const auto& reg = oracle::registry();
  std::mt19937_64 rng(3);
  int checked = 0;
  for (std::int64_t delta : {46, 55, 105, 110, 210}) {
    const auto units = unit_group(delta);
    const auto els = units.elements();
    std::uniform_int_distribution<std::size_t> pick(0, els.size() - 1);
    for (auto d : divisors_of(delta))
      for (int t = 0; t < 40; ++t) {
        const auto a = els[pick(rng)], b = els[pick(rng)];
        ASSERT_EQ(restriction_action(units, mul_mod(a, b, delta), d, reg),
                  restriction_action(units, a, d, reg).compose(restriction_action(units, b, d, reg)));
        ++checked;
      }
  }
  EXPECT_GT(checked, 1000);
}

TEST(BundledRegistry, Coverage) {
  const auto& reg = oracle::registry();
  std::set<std::int64_t> need;
  for (std::int64_t delta : {6, 10, 14, 15, 21, 23, 46, 55, 105, 2, 3, 5, 7, 11, 13, 17, 19})
    for (auto d : divisors_of(delta)) need.insert(d);
  for (auto d : need) EXPECT_TRUE(reg.contains(d)) << d;
  for (auto d : reg.conductors()) {
    const auto& rec = reg.record(d);
    EXPECT_TRUE(reg.report(d).certified) << d;
    if (rec.plus_part_order == 1 && d > 2) {
      EXPECT_TRUE(reg.action_of_unit(d, d - 1).is_inversion()) << d;
    }
    if (d >= 3) {
      EXPECT_EQ(BigInt(reg.group(d).order()), minus_class_number(d)) << d;
    }
  }
}

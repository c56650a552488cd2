#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bieber/abelian.hpp"
#include "bieber/arith.hpp"
#include "bieber/characters.hpp"
#include "bieber/error.hpp"
#include "bieber/units.hpp"

namespace bieber {

inline constexpr std::int64_t kDefaultClassNumberBound = 210;

/// Exact minus class number h^-(d) of Q(zeta_d) from generalized Bernoulli
/// numbers. Odd characters are grouped into Galois orbits; each orbit
/// contributes the norm of -B_{1,chi}/2 from Q(zeta_ord(chi)).
inline BigInt minus_class_number(std::int64_t d, std::int64_t bound = kDefaultClassNumberBound) {
  if (d < 3) throw Error(ErrorKind::OutOfRange, "minus class number needs d >= 3");
  if (d > bound)
    throw Error(ErrorKind::BoundExceeded, std::to_string(d) + " exceeds the configured bound " + std::to_string(bound));
  // Q(zeta_{2m}) = Q(zeta_m) for odd m
  const std::int64_t m = (d % 4 == 2) ? d / 2 : d;
  if (m < 3) return 1;

  const auto chars = enumerate_characters(m);
  const UnitGroup units = unit_group(m);
  const auto& orders = units.generator_orders();
  auto index_of = [&](const std::vector<std::int64_t>& k) {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < orders.size(); ++i) idx = idx * orders[i] + mod_floor(k[i], orders[i]);
    return static_cast<std::size_t>(idx);
  };

  std::vector<bool> seen(chars.size(), false);
  Rational product(1);
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const auto& chi = chars[i];
    if (chi.parity != Parity::Odd || seen[i]) continue;
    for (std::int64_t k = 1; k <= chi.order; ++k) {
      if (std::gcd(k, chi.order) != 1) continue;
      std::vector<std::int64_t> power = chi.generator_exponents;
      for (auto& e : power) e *= k;
      seen[index_of(power)] = true;
    }
    const CyclotomicNumber b1 = chi.bernoulli_b1();
    const CyclotomicNumber factor(chi.order, Rational(-1, 2) * b1.value());
    product *= factor.norm();
  }

  const std::int64_t q_index = factorize(m).size() == 1 ? 1 : 2;
  const std::int64_t w = (m % 2 == 1) ? 2 * m : m;
  const Rational h = product * q_index * w;
  if (boost::multiprecision::denominator(h) != 1)
    throw Error(ErrorKind::InternalNonInteger, "h^-(" + std::to_string(d) + ") assembled to a non-integer");
  const BigInt value = boost::multiprecision::numerator(h);
  if (value <= 0) throw Error(ErrorKind::InternalNonInteger, "h^-(" + std::to_string(d) + ") is not positive");
  return value;
}

struct GeneratorAction {
  std::int64_t unit = 0;
  ActionMatrix action;
};

/// H(Q(zeta_d)) with the action of chosen generators of (Z/d)^x.
struct ClassGroupRecord {
  std::int64_t conductor = 1;
  FinAbGroup group;
  std::vector<GeneratorAction> generator_actions;
  std::string provenance;
  std::optional<std::int64_t> plus_part_order;
};

struct ValidationReport {
  std::int64_t conductor = 0;
  bool valid = true;
  std::vector<std::string> problems;
  /// Order confirmed by the analytic minus class number.
  bool certified = false;
  std::optional<BigInt> minus_class_number;

  void fail(std::string reason) {
    valid = false;
    problems.push_back(std::move(reason));
  }
};

struct ValidationOptions {
  bool use_oracle = true;
  std::int64_t oracle_bound = kDefaultClassNumberBound;
};

namespace detail {

inline std::int64_t units_modulo(std::int64_t d) { return d <= 2 ? 1 : euler_phi(d); }

/// unit mod d -> action, from all exponent vectors over the stored generators.
/// Reports a conflict when two words for the same unit act differently.
inline std::map<std::int64_t, ActionMatrix> build_unit_table(const ClassGroupRecord& rec, std::string* conflict) {
  std::map<std::int64_t, ActionMatrix> table;
  const std::int64_t d = rec.conductor;
  const std::int64_t one = d <= 1 ? 0 : 1;
  table.emplace(one, ActionMatrix::identity(rec.group));
  if (d <= 2) return table;
  // Breadth-first closure: right-multiply known elements by each generator.
  std::vector<std::int64_t> frontier{one};
  while (!frontier.empty()) {
    std::vector<std::int64_t> next;
    for (std::int64_t u : frontier)
      for (const auto& g : rec.generator_actions) {
        const std::int64_t v = mul_mod(u, g.unit, d);
        ActionMatrix act = table.at(u).compose(g.action);
        auto [it, inserted] = table.emplace(v, act);
        if (inserted) {
          next.push_back(v);
        } else if (!(it->second == act) && conflict != nullptr && conflict->empty()) {
          *conflict = "generator actions do not define a homomorphism at unit " + std::to_string(v);
        }
      }
    frontier = std::move(next);
  }
  return table;
}

}  // namespace detail

/// Structural checks, plus the analytic order check when plus_part = 1.
inline ValidationReport validate_record(const ClassGroupRecord& rec, const ValidationOptions& options = {}) {
  ValidationReport report;
  const std::int64_t d = rec.conductor;
  report.conductor = d;
  if (d < 1) {
    report.fail("conductor must be positive");
    return report;
  }
  for (const auto& g : rec.generator_actions) {
    const std::string tag = "generator " + std::to_string(g.unit);
    if (d > 2 && std::gcd(mod_floor(g.unit, d), d) != 1) {
      report.fail(tag + " is not a unit");
      continue;
    }
    if (!(g.action.group() == rec.group)) {
      report.fail(tag + " acts on a different group");
      continue;
    }
    if (!g.action.is_well_defined()) {
      report.fail(tag + " does not induce an endomorphism");
      continue;
    }
    if (!g.action.is_automorphism()) {
      report.fail(tag + " is not an automorphism");
      continue;
    }
    const std::int64_t unit_order = d > 2 ? mult_order(g.unit, d) : 1;
    if (!g.action.power(static_cast<std::uint64_t>(unit_order)).is_identity())
      report.fail(tag + ": action order does not divide the unit order " + std::to_string(unit_order));
  }
  if (!report.valid) return report;

  for (std::size_t i = 0; i < rec.generator_actions.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const auto& a = rec.generator_actions[i].action;
      const auto& b = rec.generator_actions[j].action;
      if (!(a.compose(b) == b.compose(a))) report.fail("generator actions do not commute");
    }
  if (!report.valid) return report;

  std::string conflict;
  const auto table = detail::build_unit_table(rec, &conflict);
  if (!conflict.empty()) report.fail(conflict);
  if (static_cast<std::int64_t>(table.size()) != detail::units_modulo(d))
    report.fail("stored generators do not generate (Z/" + std::to_string(d) + ")^x");
  if (!report.valid) return report;

  if (rec.plus_part_order && *rec.plus_part_order < 1) report.fail("plus_part must be positive");
  if (rec.plus_part_order == 1) {
    if (d > 2 && !table.at(d - 1).is_inversion())
      report.fail("plus_part = 1 but -1 does not act by inversion");
    if (d <= 2) {
      report.minus_class_number = BigInt(1);
      if (rec.group.order() != 1) report.fail("class group of Q is trivial");
      else report.certified = true;
    } else if (options.use_oracle && d <= options.oracle_bound) {
      const BigInt h = minus_class_number(d, options.oracle_bound);
      report.minus_class_number = h;
      if (BigInt(rec.group.order()) != h)
        report.fail("|group| = " + std::to_string(rec.group.order()) + " but h^-(" + std::to_string(d) +
                    ") = " + h.str());
      else
        report.certified = true;
    }
  }
  return report;
}

/// Validated collection of class-group records keyed by conductor.
class Registry {
 public:
  void add(ClassGroupRecord rec, const ValidationOptions& options = {}) {
    const std::int64_t d = rec.conductor;
    if (entries_.count(d) != 0) throw Error(ErrorKind::DuplicateConductor, "conductor " + std::to_string(d));
    ValidationReport report = validate_record(rec, options);
    if (!report.valid)
      throw Error(ErrorKind::ValidationError, "conductor " + std::to_string(d) + ": " + report.problems.front());
    Entry e{std::move(rec), {}, std::move(report)};
    e.unit_table = detail::build_unit_table(e.record, nullptr);
    entries_.emplace(d, std::move(e));
  }

  bool contains(std::int64_t d) const { return entries_.count(d) != 0; }
  std::size_t size() const { return entries_.size(); }

  const ClassGroupRecord& record(std::int64_t d) const { return entry(d).record; }
  const ValidationReport& report(std::int64_t d) const { return entry(d).report; }
  const FinAbGroup& group(std::int64_t d) const { return entry(d).record.group; }

  std::vector<std::int64_t> conductors() const {
    std::vector<std::int64_t> out;
    for (const auto& [d, e] : entries_) out.push_back(d);
    return out;
  }

  /// Action of the unit u mod d on H(Q(zeta_d)).
  const ActionMatrix& action_of_unit(std::int64_t d, std::int64_t u) const {
    const Entry& e = entry(d);
    const std::int64_t key = d <= 1 ? 0 : mod_floor(u, d);
    auto it = e.unit_table.find(key);
    if (it == e.unit_table.end())
      throw Error(ErrorKind::DecompositionFailure,
                  std::to_string(u) + " mod " + std::to_string(d) + " is not expressible in the stored generators");
    return it->second;
  }

 private:
  struct Entry {
    ClassGroupRecord record;
    std::map<std::int64_t, ActionMatrix> unit_table;
    ValidationReport report;
  };

  const Entry& entry(std::int64_t d) const {
    auto it = entries_.find(d);
    if (it == entries_.end()) throw Error(ErrorKind::MissingConductor, "no class group record for conductor " + std::to_string(d));
    return it->second;
  }

  std::map<std::int64_t, Entry> entries_;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

inline std::int64_t parse_int(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty())
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": expected integer, got '" + tok + "'");
  return v;
}

}  // namespace detail

/// Parses the line-oriented registry format without validating the algebra.
inline std::vector<ClassGroupRecord> parse_registry(const std::string& text) {
  std::vector<ClassGroupRecord> records;
  std::istringstream in(text);
  enum class Expect { Conductor, Invariants, PlusPart, GenOrProvenance, End } state = Expect::Conductor;
  ClassGroupRecord cur;
  std::string raw;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto first = raw.find_first_not_of(" \t");
    if (first == std::string::npos || raw[first] == '#') continue;
    const auto toks = detail::split_ws(raw);
    const std::string& key = toks.front();
    switch (state) {
      case Expect::Conductor:
        if (key != "conductor" || toks.size() != 2) fail("expected 'conductor INT'");
        cur = ClassGroupRecord{};
        cur.conductor = detail::parse_int(toks[1], lineno);
        if (cur.conductor < 1) fail("conductor must be positive");
        state = Expect::Invariants;
        break;
      case Expect::Invariants: {
        if (key != "invariants") fail("expected 'invariants INT*'");
        std::vector<std::int64_t> inv;
        for (std::size_t i = 1; i < toks.size(); ++i) inv.push_back(detail::parse_int(toks[i], lineno));
        try {
          cur.group = FinAbGroup(std::move(inv));
        } catch (const Error& e) {
          fail(e.what());
        }
        state = Expect::PlusPart;
        break;
      }
      case Expect::PlusPart:
        if (key != "plus_part" || toks.size() != 2) fail("expected 'plus_part (INT | unknown)'");
        if (toks[1] != "unknown") cur.plus_part_order = detail::parse_int(toks[1], lineno);
        state = Expect::GenOrProvenance;
        break;
      case Expect::GenOrProvenance:
        if (key == "gen") {
          const std::size_t r = cur.group.rank();
          if (toks.size() < 3 || toks[2] != "matrix") fail("expected 'gen INT matrix INT*'");
          if (toks.size() != 3 + r * r)
            fail("matrix needs " + std::to_string(r * r) + " entries, got " + std::to_string(toks.size() - 3));
          GeneratorAction g;
          g.unit = detail::parse_int(toks[1], lineno);
          IntMatrix m(r, r);
          for (std::size_t i = 0; i < r * r; ++i) m(i / r, i % r) = detail::parse_int(toks[3 + i], lineno);
          try {
            g.action = ActionMatrix(cur.group, std::move(m));
          } catch (const Error& e) {
            fail(e.what());
          }
          cur.generator_actions.push_back(std::move(g));
        } else if (key == "provenance") {
          std::string rest = raw.substr(raw.find("provenance") + 10);
          const auto b = rest.find_first_not_of(" \t");
          rest = b == std::string::npos ? "" : rest.substr(b);
          if (rest.size() >= 2 && rest.front() == '"' && rest.back() == '"') rest = rest.substr(1, rest.size() - 2);
          cur.provenance = rest;
          state = Expect::End;
        } else {
          fail("expected 'gen' or 'provenance'");
        }
        break;
      case Expect::End:
        if (key != "end" || toks.size() != 1) fail("expected 'end'");
        records.push_back(std::move(cur));
        state = Expect::Conductor;
        break;
    }
  }
  if (state != Expect::Conductor) throw Error(ErrorKind::ParseError, "unterminated record at end of input");
  return records;
}

/// Parses and validates a registry document; rejects duplicate conductors.
inline Registry load_registry(const std::string& text, const ValidationOptions& options = {}) {
  Registry reg;
  for (auto& rec : parse_registry(text)) reg.add(std::move(rec), options);
  return reg;
}

/// Action of a (a unit mod delta) on H(Q(zeta_d)) for d | delta.
inline ActionMatrix restriction_action(const UnitGroup& units, std::int64_t a, std::int64_t d, const Registry& registry) {
  const std::int64_t delta = units.modulus();
  if (d < 1 || delta % d != 0)
    throw Error(ErrorKind::OutOfRange, std::to_string(d) + " does not divide " + std::to_string(delta));
  if (std::gcd(mod_floor(a, delta), delta) != 1)
    throw Error(ErrorKind::NotCoprime, std::to_string(a) + " is not a unit mod " + std::to_string(delta));
  return registry.action_of_unit(d, a);
}

}  // namespace bieber

#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bieber/classgroups.hpp"
#include "bieber/cohomology.hpp"
#include "bieber/genus.hpp"
#include "bieber/lattice.hpp"
#include "bieber/registry_data.hpp"
#include "bieber/report.hpp"

namespace bieber::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 2;
inline constexpr int kExitBounded = 3;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// The registry shipped with the library, validated once per process.
inline const Registry& bundled_registry() {
  static const Registry reg = load_registry(std::string(kBundledRegistry));
  return reg;
}

struct Options {
  std::optional<std::int64_t> delta;
  std::string lattice;
  std::string lattice2;
  std::string registry_path;
  std::string orbit_terms_path;
  std::string level = "profinite";
  std::string bounds = "1,1,1";
  std::optional<std::int64_t> conductor;
  std::optional<std::int64_t> prime;
  std::optional<std::int64_t> dimension;
  bool json = false;
};

struct Outcome {
  std::string text;
  int code = kExitOk;
};

inline const Registry& load_selected_registry(const Options& o, Registry& storage) {
  if (o.registry_path.empty()) return bundled_registry();
  storage = load_registry(read_file(o.registry_path));
  return storage;
}

inline std::string emit(const Options& o, const Json& j, const std::string& text) {
  return o.json ? j.dump(2) + "\n" : text;
}

inline Outcome run_genus(const Options& o) {
  Registry storage;
  const Registry& reg = load_selected_registry(o, storage);
  const LatticeSpec spec = parse_lattice(o.lattice, o.delta);
  const OrbitPolicy policy = o.orbit_terms_path.empty() ? OrbitPolicy{} : parse_orbit_terms(read_file(o.orbit_terms_path));
  const IntMatrix a = compile_matrix(spec);
  const bool special = !special_primes(a, spec.context).empty();
  const GenusReport r = special ? genus_special(spec, reg, policy) : genus_cardinality(spec, reg, policy);
  return {emit(o, render_json(r), render_text(r)), r.bounded() ? kExitBounded : kExitOk};
}

inline Outcome run_crystal_class(const Options& o) {
  Registry storage;
  const Registry& reg = load_selected_registry(o, storage);
  const LatticeSpec spec = parse_lattice(o.lattice, o.delta);
  const IntMatrix a = compile_matrix(spec);
  const auto d = special_primes(a, spec.context);
  const InvariantTuple inv = invariants_of(spec, reg);
  const std::int64_t size = crystal_class_size(inv, d, reg);
  std::vector<ProductElement> reps;
  bool enumerated = true;
  try {
    reps = representatives_T(inv, d, reg);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EnumerationBoundExceeded) throw;
    enumerated = false;
  }
  std::vector<std::int64_t> odd_d;
  for (auto p : d)
    if (p != 2) odd_d.push_back(p);
  const std::string group = odd_d.empty() ? "Gal(zeta_delta)" : "H_D";

  std::ostringstream os;
  os << "command: crystal-class\ndelta: " << spec.context.delta() << "\nlattice: " << to_string(spec)
     << "\nspecial_primes: " << format_list(d) << "\nacting_group: " << group << "\ncrystal_class_size: " << size << "\n";
  for (std::size_t i = 0; i < reps.size(); ++i)
    os << "representative " << i << ": " << format_tuple(spec.context.divisors(), reps[i]) << "\n";
  if (!enumerated) os << "note: representatives not enumerated: class-tuple product too large\n";

  Json j;
  j["command"] = "crystal-class";
  j["delta"] = spec.context.delta();
  j["lattice"] = to_string(spec);
  j["special_primes"] = d;
  j["acting_group"] = group;
  j["crystal_class_size"] = size;
  j["conductors"] = spec.context.divisors();
  j["representatives_enumerated"] = enumerated;
  j["representatives"] = reps;
  return {emit(o, j, os.str()), kExitOk};
}

inline Outcome run_iso_check(const Options& o) {
  Registry storage;
  const Registry& reg = load_selected_registry(o, storage);
  std::int64_t delta = 0;
  if (o.delta) {
    delta = *o.delta;
  } else {
    delta = std::lcm(infer_delta(parse_blocks(o.lattice)), infer_delta(parse_blocks(o.lattice2)));
  }
  const SquarefreeContext ctx = build_context(delta);
  const InvariantTuple a = invariants_of(parse_lattice(o.lattice, ctx), reg);
  const InvariantTuple b = invariants_of(parse_lattice(o.lattice2, ctx), reg);

  Decision result = Decision::False;
  std::optional<std::int64_t> witness;
  if (o.level == "profinite") {
    result = profinitely_isomorphic(a, b) ? Decision::True : Decision::False;
  } else if (o.level == "semilinear") {
    witness = semilinear_witness(a, b, reg);
    result = witness ? Decision::True : Decision::False;
  } else if (o.level == "linear") {
    result = linearly_isomorphic(a, b, reg);
    if (result == Decision::True) witness = semilinear_witness(a, b, reg);
  } else {
    throw Error(ErrorKind::ParseError, "--level must be profinite, semilinear or linear");
  }

  std::ostringstream os;
  os << "command: iso-check\ndelta: " << delta << "\nlattice: " << o.lattice << "\nlattice2: " << o.lattice2
     << "\nlevel: " << o.level << "\nresult: " << to_string(result) << "\n";
  if (witness) os << "galois_unit: " << *witness << "\n";
  if (result == Decision::Undecidable) os << "note: cancellation fails for this delta; invariants do not decide\n";
  Json j;
  j["command"] = "iso-check";
  j["delta"] = delta;
  j["lattice"] = o.lattice;
  j["lattice2"] = o.lattice2;
  j["level"] = o.level;
  j["result"] = to_string(result);
  j["galois_unit"] = witness ? Json(*witness) : Json(nullptr);
  return {emit(o, j, os.str()), result == Decision::Undecidable ? kExitBounded : kExitOk};
}

inline Outcome run_cohomology(const Options& o) {
  const LatticeSpec spec = parse_lattice(o.lattice, o.delta);
  const IntMatrix a = compile_matrix(spec);
  const std::int64_t delta = spec.context.delta();
  std::vector<std::int64_t> primes = spec.context.primes();
  if (o.prime) {
    if (!spec.context.has_prime(*o.prime))
      throw Error(ErrorKind::PrimeNotInModulus, std::to_string(*o.prime) + " is not a prime divisor of " + std::to_string(delta));
    primes = {*o.prime};
  }
  std::ostringstream os;
  os << "command: cohomology\ndelta: " << delta << "\nlattice: " << to_string(spec) << "\nrank: " << a.rows() << "\n";
  Json j;
  j["command"] = "cohomology";
  j["delta"] = delta;
  j["lattice"] = to_string(spec);
  j["rank"] = a.rows();
  Json jp = Json::array();
  for (std::int64_t p : primes) {
    const CohomologyResult coh = h2(a, delta, p);
    const BlockCensus c = census(a, delta, p);
    const BigInt fixed = fixed_nonzero_count(coh);
    std::vector<std::vector<std::int64_t>> rows;
    for (std::size_t i = 0; i < coh.g_action.matrix().rows(); ++i) {
      rows.emplace_back();
      for (std::size_t k = 0; k < coh.g_action.matrix().cols(); ++k) rows.back().push_back(coh.g_action.matrix()(i, k));
    }
    os << "prime " << p << ":\n  h2_invariants: " << format_list(coh.group.invariant_factors()) << "\n  h2_order: "
       << coh.group.exact_order() << "\n  b_p: " << coh.b_p << "\n  fixed_rank: " << coh.fixed_rank << "\n  g_action: "
       << coh.g_action.matrix() << "\n  census: (" << c.a_p << "," << c.b_p << "," << c.c_p << ")\n  exceptional: "
       << (is_exceptional(c) ? "yes" : "no") << "\n  fixed_nonzero: " << fixed << "\n";
    jp.push_back({{"prime", p},
                  {"h2_invariants", coh.group.invariant_factors()},
                  {"h2_order", json_integer(coh.group.exact_order())},
                  {"b_p", coh.b_p},
                  {"fixed_rank", coh.fixed_rank},
                  {"g_action", rows},
                  {"census", {{"a", c.a_p}, {"b", c.b_p}, {"c", c.c_p}}},
                  {"exceptional", is_exceptional(c)},
                  {"fixed_nonzero", json_integer(fixed)}});
  }
  j["primes"] = jp;
  if (!o.prime) {
    const auto d = special_primes(a, spec.context);
    const BigInt x = x_size(a, spec.context);
    os << "special_primes: " << format_list(d) << "\nx_size: " << x << "\n";
    j["special_primes"] = d;
    j["x_size"] = json_integer(x);
  }
  return {emit(o, j, os.str()), kExitOk};
}

inline Outcome run_classgroup_verify(const Options& o) {
  const std::string text = o.registry_path.empty() ? std::string(kBundledRegistry) : read_file(o.registry_path);
  auto records = parse_registry(text);
  std::set<std::int64_t> seen;
  for (const auto& r : records)
    if (!seen.insert(r.conductor).second)
      throw Error(ErrorKind::DuplicateConductor, "conductor " + std::to_string(r.conductor));
  if (o.conductor && !seen.count(*o.conductor))
    throw Error(ErrorKind::MissingConductor, "no class group record for conductor " + std::to_string(*o.conductor));

  std::ostringstream os;
  os << "command: classgroup-verify\n";
  Json j;
  j["command"] = "classgroup-verify";
  Json jr = Json::array();
  for (const auto& r : records) {
    if (o.conductor && r.conductor != *o.conductor) continue;
    const ValidationReport v = validate_record(r);
    if (!v.valid)
      throw Error(ErrorKind::ValidationError, "conductor " + std::to_string(r.conductor) + ": " + v.problems.front());
    const std::string plus = r.plus_part_order ? std::to_string(*r.plus_part_order) : "unknown";
    os << "conductor " << r.conductor << ": invariants " << format_list(r.group.invariant_factors()) << ", order "
       << r.group.order() << ", plus_part " << plus << ", h_minus "
       << (v.minus_class_number ? v.minus_class_number->str() : "not computed") << ", "
       << (v.certified ? "certified" : "uncertified order") << "\n";
    jr.push_back({{"conductor", r.conductor},
                  {"invariants", r.group.invariant_factors()},
                  {"order", r.group.order()},
                  {"plus_part", r.plus_part_order ? Json(*r.plus_part_order) : Json("unknown")},
                  {"h_minus", v.minus_class_number ? json_integer(*v.minus_class_number) : Json(nullptr)},
                  {"certified", v.certified},
                  {"provenance", r.provenance}});
  }
  j["records"] = jr;
  return {emit(o, j, os.str()), kExitOk};
}

inline Outcome run_charlap(const Options& o) {
  Registry storage;
  const Registry& reg = load_selected_registry(o, storage);
  CharlapBounds b;
  {
    std::vector<std::int64_t> v;
    std::stringstream ss(o.bounds);
    for (std::string tok; std::getline(ss, tok, ',');) v.push_back(detail::parse_int(tok, 0));
    if (v.size() != 3) throw Error(ErrorKind::ParseError, "--bounds expects a,b,c");
    b = {v[0], v[1], v[2]};
  }
  const CharlapResult r = charlap_enumerate(*o.prime, b, reg, o.dimension);
  std::ostringstream os;
  os << "command: charlap\nprime: " << r.prime << "\nbounds: " << b.a << "," << b.b << "," << b.c
     << "\ngalois_orbits: " << r.galois_orbits << "\ninversion_orbits: " << r.inversion_orbits << "\n";
  if (r.dimension_filtered) os << "dimension_filter: " << *o.dimension << " (derived bookkeeping)\n";
  Json j;
  j["command"] = "charlap";
  j["prime"] = r.prime;
  j["bounds"] = {b.a, b.b, b.c};
  j["galois_orbits"] = r.galois_orbits;
  j["inversion_orbits"] = r.inversion_orbits;
  j["dimension_filter"] = o.dimension ? Json(*o.dimension) : Json(nullptr);
  Json jt = Json::array();
  for (const auto& t : r.tuples) {
    if (t.exceptional)
      os << "exceptional b=" << t.b << ": theta " << t.theta_count << ", dimension " << t.dimension << "\n";
    else
      os << "tuple (" << t.a << "," << t.b << "," << t.c << "): theta " << t.theta_count << ", dimension "
         << t.dimension << "\n";
    jt.push_back({{"exceptional", t.exceptional},
                  {"a", t.a},
                  {"b", t.b},
                  {"c", t.c},
                  {"theta_count", t.theta_count},
                  {"dimension", t.dimension}});
  }
  os << "total: " << r.total << "\n";
  j["tuples"] = jt;
  j["total"] = json_integer(r.total);
  return {emit(o, j, os.str()), kExitOk};
}

inline std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

/// Runs one command. Arguments exclude the program name. The report goes to
/// out only on success; diagnostics are a single "error: Kind: ..." line.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Profinite genus of Bieberbach groups with cyclic square-free holonomy", "bieber"};
  app.require_subcommand(1);
  Options o;

  auto add_registry = [&](CLI::App* c) { c->add_option("--registry", o.registry_path, "class group registry file"); };
  auto add_json = [&](CLI::App* c) { c->add_flag("--json", o.json, "JSON output"); };
  auto add_lattice = [&](CLI::App* c) {
    c->add_option("--lattice", o.lattice, "lattice, e.g. R(6)+Z")->required();
    c->add_option("--delta", o.delta, "holonomy order (default: lcm of the block indices)");
  };

  auto* genus = app.add_subcommand("genus", "cardinality of the profinite genus");
  add_lattice(genus);
  add_registry(genus);
  genus->add_option("--orbit-terms", o.orbit_terms_path, "file of 'p rep_index count' lines");
  add_json(genus);

  auto* crystal = app.add_subcommand("crystal-class", "number of lattices in the crystal class");
  add_lattice(crystal);
  add_registry(crystal);
  add_json(crystal);

  auto* iso = app.add_subcommand("iso-check", "compare two lattices");
  add_lattice(iso);
  iso->add_option("--lattice2", o.lattice2, "second lattice")->required();
  iso->add_option("--level", o.level, "profinite | semilinear | linear")
      ->check(CLI::IsMember({"profinite", "semilinear", "linear"}));
  add_registry(iso);
  add_json(iso);

  auto* coh = app.add_subcommand("cohomology", "H^2(C_p, M), census and X(G, M)");
  add_lattice(coh);
  coh->add_option("--prime", o.prime, "restrict to one prime");
  add_json(coh);

  auto* verify = app.add_subcommand("classgroup-verify", "validate registry records against h^-");
  verify->add_option("--conductor", o.conductor, "only this conductor");
  add_registry(verify);
  add_json(verify);

  auto* charlap = app.add_subcommand("charlap", "enumerate classification tuples for prime holonomy");
  charlap->add_option("--prime", o.prime, "holonomy order p")->required();
  charlap->add_option("--bounds", o.bounds, "a,b,c upper bounds (default 1,1,1)");
  charlap->add_option("--dimension", o.dimension, "keep tuples of this dimension only");
  add_registry(charlap);
  add_json(charlap);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: ParseError: " << one_line(e.what()) << "\n";
    return kExitError;
  }

  try {
    Outcome r;
    if (genus->parsed()) r = run_genus(o);
    else if (crystal->parsed()) r = run_crystal_class(o);
    else if (iso->parsed()) r = run_iso_check(o);
    else if (coh->parsed()) r = run_cohomology(o);
    else if (verify->parsed()) r = run_classgroup_verify(o);
    else r = run_charlap(o);
    out << r.text;
    return r.code;
  } catch (const Error& e) {
    err << "error: " << one_line(e.what()) << "\n";
  } catch (const std::exception& e) {
    err << "error: Internal: " << one_line(e.what()) << "\n";
  }
  return kExitError;
}

}  // namespace bieber::cli

#pragma once

#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bieber/classgroups.hpp"
#include "bieber/cohomology.hpp"
#include "bieber/genus.hpp"
#include "bieber/lattice.hpp"

namespace bieber {

using Json = nlohmann::ordered_json;

/// Exact integer for JSON: a number when it fits in 64 bits, else a decimal string.
inline Json json_integer(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return v.convert_to<std::int64_t>();
  return v.str();
}

inline std::string format_coordinates(const Coordinates& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ":" : "") + std::to_string(x[i]);
  return s + ")";
}

inline std::string format_tuple(const std::vector<std::int64_t>& conductors, const ProductElement& x) {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += (i ? " " : "") + std::to_string(conductors[i]) + ":" + format_coordinates(x[i]);
  return s;
}

inline std::string format_list(const std::vector<std::int64_t>& v) {
  if (v.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

inline std::string render_text(const GenusReport& r) {
  std::ostringstream os;
  os << "command: genus\n";
  os << "delta: " << r.delta << "\n";
  os << "lattice: " << r.lattice << "\n";
  os << "formula: " << (r.special_formula ? "special" : "general") << "\n";
  os << "special_primes: " << format_list(r.special_primes) << "\n";
  for (const auto& p : r.primes)
    os << "prime " << p.prime << ": h2_order " << p.h2_order << ", census (" << p.census.a_p << "," << p.census.b_p
       << "," << p.census.c_p << "), fixed_nonzero " << p.fixed_nonzero << (p.special ? ", special" : "") << "\n";
  os << "x_size: " << r.x_size << "\n";
  os << "crystal_class_size: " << r.crystal_class_size << "\n";
  if (r.representatives_enumerated)
    for (std::size_t i = 0; i < r.representatives.size(); ++i)
      os << "representative " << i << ": " << format_tuple(r.conductors, r.representatives[i]) << "\n";
  for (const auto& t : r.terms) {
    os << "term rep " << t.representative << " p " << t.prime << ": ";
    if (t.value) os << *t.value;
    else os << "unknown (1.." << t.maximum << ")";
    os << " [" << to_string(t.source) << "]\n";
  }
  if (r.genus) {
    os << "genus: " << *r.genus << "\n";
  } else {
    os << "genus: unresolved\n";
    os << "genus_lower: " << r.lower << "\n";
    os << "genus_upper: " << r.upper << "\n";
  }
  os << "upper_bound: " << r.upper_bound << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

inline Json render_json(const GenusReport& r) {
  Json j;
  j["command"] = "genus";
  j["delta"] = r.delta;
  j["lattice"] = r.lattice;
  j["formula"] = r.special_formula ? "special" : "general";
  j["special_primes"] = r.special_primes;
  Json primes = Json::array();
  for (const auto& p : r.primes)
    primes.push_back({{"prime", p.prime},
                      {"h2_order", json_integer(p.h2_order)},
                      {"census", {{"a", p.census.a_p}, {"b", p.census.b_p}, {"c", p.census.c_p}}},
                      {"fixed_nonzero", json_integer(p.fixed_nonzero)},
                      {"special", p.special}});
  j["primes"] = primes;
  j["x_size"] = json_integer(r.x_size);
  j["crystal_class_size"] = r.crystal_class_size;
  j["conductors"] = r.conductors;
  j["representatives_enumerated"] = r.representatives_enumerated;
  j["representatives"] = r.representatives;
  Json terms = Json::array();
  for (const auto& t : r.terms) {
    Json jt = {{"representative", t.representative}, {"prime", t.prime}, {"source", to_string(t.source)}};
    jt["value"] = t.value ? Json(*t.value) : Json(nullptr);
    jt["maximum"] = json_integer(t.maximum);
    terms.push_back(jt);
  }
  j["terms"] = terms;
  j["status"] = r.genus ? "exact" : "bounded";
  j["genus"] = r.genus ? json_integer(*r.genus) : Json(nullptr);
  j["genus_lower"] = json_integer(r.lower);
  j["genus_upper"] = json_integer(r.upper);
  j["upper_bound"] = json_integer(r.upper_bound);
  j["notes"] = r.notes;
  return j;
}

}  // namespace bieber

// JSON serialization: rational functions and Laurent series with bit-exact
// round trips, custom bicharacter specs loaded from generator-pair tables,
// and axiom-check reports.  Schema is versioned with a top-level "schema": 1.
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tva/bicharacter.hpp"
#include "tva/vertex.hpp"

namespace tva {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail_js {

inline json cyclo_to_json(const Cyclo& c) {
  json out = json::array();
  for (const auto& r : c.coeffs()) out.push_back(r.str());
  return out;
}

inline Cyclo cyclo_from_json(int order, const json& j) {
  if (!j.is_array()) throw std::invalid_argument("coefficient must be an array of rationals");
  Cyclo out = Cyclo::zero(order);
  for (std::size_t i = 0; i < j.size(); ++i) {
    Rational r(j[i].get<std::string>());
    out += Cyclo::eps_pow(order, static_cast<int>(i)) * Cyclo(order, r);
  }
  return out;
}

inline json terms_to_json(const std::map<Expo, Cyclo>& terms) {
  json out = json::array();
  for (const auto& [e, c] : terms) out.push_back(json{{"e", e}, {"c", cyclo_to_json(c)}});
  return out;
}

inline void terms_from_json(int order, const json& j, std::map<Expo, Cyclo>& terms) {
  for (const auto& t : j) {
    Expo e = t.at("e").get<Expo>();
    terms.emplace(std::move(e), cyclo_from_json(order, t.at("c")));
  }
}

inline void require_schema(const json& j) {
  if (!j.is_object() || j.value("schema", 0) != kSchemaVersion)
    throw std::invalid_argument("missing or unsupported schema version");
}

}  // namespace detail_js

inline json to_json(const RatFn& f) {
  json den = json::array();
  for (const auto& pf : f.den()) den.push_back(json{{"i", pf.i}, {"j", pf.j}, {"k", pf.k}});
  return json{{"schema", kSchemaVersion},
              {"kind", "ratfn"},
              {"nvars", f.nvars()},
              {"order", f.order()},
              {"num", detail_js::terms_to_json(f.num().terms)},
              {"den", den}};
}

inline RatFn ratfn_from_json(const json& j) {
  detail_js::require_schema(j);
  if (j.value("kind", "") != "ratfn") throw std::invalid_argument("expected a ratfn object");
  int nvars = j.at("nvars").get<int>();
  int order = j.at("order").get<int>();
  LaurentPoly num(nvars, order);
  detail_js::terms_from_json(order, j.at("num"), num.terms);
  std::vector<PoleFactor> den;
  for (const auto& d : j.at("den"))
    den.push_back(PoleFactor{d.at("i").get<int>(), d.at("j").get<int>(), d.at("k").get<int>()});
  return RatFn(std::move(num), std::move(den));
}

inline json to_json(const LaurentSeries& s) {
  return json{{"schema", kSchemaVersion},
              {"kind", "series"},
              {"nvars", s.nvars},
              {"order", s.order},
              {"window", s.window},
              {"region", s.region},
              {"terms", detail_js::terms_to_json(s.terms)}};
}

inline LaurentSeries series_from_json(const json& j) {
  detail_js::require_schema(j);
  if (j.value("kind", "") != "series") throw std::invalid_argument("expected a series object");
  LaurentSeries s(j.at("nvars").get<int>(), j.at("order").get<int>(), j.at("window").get<int>(),
                  j.at("region").get<std::vector<int>>());
  std::map<Expo, Cyclo> terms;
  detail_js::terms_from_json(s.order, j.at("terms"), terms);
  for (auto& [e, c] : terms) s.add_term(e, c);
  return s;
}

// Custom bicharacter specs.  Atom tags follow the table convention:
// 0 = phi, 1 = psi, 2 = h, 3 = lattice unit.
inline json to_json(const BicharacterSpec& r) {
  static const char* names[] = {"FreePhi", "FreePhiPsi", "Boson", "Lattice", "LatticeB", "LatticeD"};
  json table = json::array();
  for (const auto& [key, value] : r.table)
    table.push_back(json{{"a", key.first}, {"b", key.second}, {"value", to_json(value)}});
  return json{{"schema", kSchemaVersion},
              {"kind", "bicharacter"},
              {"order", r.N},
              {"ambient", names[static_cast<int>(r.amb)]},
              {"table", table}};
}

inline BicharacterSpec spec_from_json(const json& j) {
  detail_js::require_schema(j);
  if (j.value("kind", "") != "bicharacter")
    throw std::invalid_argument("expected a bicharacter object");
  BicharacterSpec r;
  r.N = j.at("order").get<int>();
  if (r.N < 1) throw std::invalid_argument("order must be positive");
  std::string amb = j.at("ambient").get<std::string>();
  if (amb == "FreePhi") r.amb = Ambient::FreePhi;
  else if (amb == "FreePhiPsi") r.amb = Ambient::FreePhiPsi;
  else if (amb == "Boson") r.amb = Ambient::Boson;
  else if (amb == "Lattice") r.amb = Ambient::Lattice;
  else if (amb == "LatticeB") r.amb = Ambient::LatticeB;
  else if (amb == "LatticeD") r.amb = Ambient::LatticeD;
  else throw std::invalid_argument("unknown ambient: " + amb);
  for (const auto& t : j.at("table")) {
    int a = t.at("a").get<int>(), b = t.at("b").get<int>();
    if (a < 0 || a > 3 || b < 0 || b > 3)
      throw std::invalid_argument("atom tags must lie in 0..3");
    RatFn v = ratfn_from_json(t.at("value"));
    if (v.nvars() != 2 || v.order() != r.N)
      throw std::invalid_argument("table values must be two-variable over the spec's order");
    r.table[{a, b}] = std::move(v);
  }
  if (r.amb == Ambient::LatticeB && !relation_consistency(r, Ambient::LatticeB))
    throw std::invalid_argument("lattice values inconsistent with the order-two reflection relation");
  if (r.amb == Ambient::LatticeD && !relation_consistency(r, Ambient::LatticeD))
    throw std::invalid_argument("lattice values inconsistent with the evenness relation");
  return r;
}

inline json to_json(const AxiomReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back(json{{"axiom", c.axiom},
                          {"instance", c.instance},
                          {"pass", c.pass},
                          {"witness", c.witness}});
  return json{{"schema", kSchemaVersion},
              {"kind", "axiom_report"},
              {"pass", rep.pass},
              {"sampled_scope", rep.sampled_scope},
              {"checks", checks}};
}

}  // namespace tva

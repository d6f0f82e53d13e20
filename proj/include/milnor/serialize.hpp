#pragma once

// JSON rendering. Objects use insertion-ordered keys so that equal inputs give
// byte-identical output.

#include <string>

#include <nlohmann/json.hpp>

#include "milnor/dsl.hpp"
#include "milnor/normal_form.hpp"

namespace milnor {

using Json = nlohmann::ordered_json;

inline Json to_json(const FqElem& x) {
  if (x.code() == 0) return Json{{"zero", true}};
  return Json{{"dlog", x.dlog()}};
}

inline Json constant_json(const FqField& f, std::uint32_t code) {
  if (code == 0) return Json{{"zero", true}};
  return Json{{"dlog", f.dlog(code)}};
}

/// {"p", "d", "modulus"}: modulus coefficients from the constant term up.
inline Json field_header(const FqField& f) {
  Json m = Json::array();
  for (auto c : f.modulus()) m.push_back(c);
  return Json{{"p", f.characteristic()}, {"d", f.degree()}, {"modulus", m}, {"generator", constant_json(f, f.generator_code())}};
}

inline Json tower_header(const TowerField& t) {
  Json j = field_header(*t.base());
  j["vars"] = t.vars();
  if (t.integral())
    j["mode"] = "integral";
  else
    j["mode"] = t.modulus();
  if (t.num_vars()) j["s_inf_uniformizer"] = t.var(top_var(t)) + "^-1";
  return j;
}

inline Json int_json(const Int& v) {
  if (v >= Int(INT64_MIN) && v <= Int(INT64_MAX)) return static_cast<std::int64_t>(v);
  return to_string(v);
}

inline Json to_json(const UnitElem& u) {
  const auto& t = *u.tower();
  Json fs = Json::array();
  for (const auto& x : u.factors())
    fs.push_back(Json{{"var", t.var(x.var)}, {"root", constant_json(*t.base(), x.root)}, {"exp", int_json(x.exp)}});
  return Json{{"c", int_json(u.const_dlog())}, {"factors", fs}};
}

inline Json to_json(const KChain& x) {
  Json terms = Json::array();
  for (const auto& [s, c] : x.terms()) {
    Json e = Json::array();
    for (const auto& u : s.entries()) e.push_back(to_json(u));
    terms.push_back(Json{{"coeff", int_json(c)}, {"symbol", e}});
  }
  return Json{{"degree", x.degree()}, {"text", format_chain(x)}, {"terms", terms}};
}

inline std::string place_key(const FqField& f, std::uint32_t root) {
  return root == 0 ? "a=zero" : "a=" + std::to_string(f.dlog(root));
}

inline Json to_json(const NormalForm& nf, const FqField& f) {
  const auto& d = nf.data();
  if (std::holds_alternative<NfZero>(d)) return Json{{"zero", true}};
  if (const auto* x = std::get_if<NfK0>(&d)) return Json{{"K0", int_json(x->value)}};
  if (const auto* x = std::get_if<NfK1>(&d)) return Json{{"K1", int_json(x->value)}};
  const auto& node = std::get<NfNode>(d);
  Json res = Json::object();
  for (const auto& r : node.residues) res[place_key(f, r.root)] = to_json(r.nf, f);
  return Json{{"base", to_json(*node.base, f)}, {"residues", res}};
}

/// Indented text rendering of a normal form, one component per line.
inline std::string format_normal_form(const NormalForm& nf, const TowerField& t, const std::string& indent = "") {
  const auto& d = nf.data();
  if (std::holds_alternative<NfZero>(d)) return indent + "0\n";
  if (const auto* x = std::get_if<NfK0>(&d)) return indent + "K0 " + to_string(x->value) + "\n";
  if (const auto* x = std::get_if<NfK1>(&d)) return indent + "K1 g^" + to_string(x->value) + "\n";
  const auto& node = std::get<NfNode>(d);
  const auto inner = t.drop_top();
  std::string out = indent + "s_inf:\n" + format_normal_form(*node.base, *inner, indent + "  ");
  for (const auto& r : node.residues)
    out += indent + "residue " + format_place(t, Place::finite(r.root)) + ":\n" +
           format_normal_form(r.nf, *inner, indent + "  ");
  return out;
}

}  // namespace milnor

#pragma once

// Text syntax for fields, units, chains and presentations.
//
//   field        GF(5)(t,u) mod 2      GF(2^2)(t) integral      GF(7)
//   unit         g^3 * (t-1)^2 * (u-3)^-1      -t      u-1      4
//   chain        3{t, u} - {t-2, u}    0
//   presentation [{t,u}; {t,v}]        a chain read term by term
//
// Integer constants are read modulo p; over GF(p^d), d > 1, only 0, 1 and -1
// may be written as integers and everything else as a power of g.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "milnor/presentation.hpp"

namespace milnor {

namespace detail {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : s_(text) {}

  /// Offset of the next token.
  std::size_t pos() {
    skip_ws();
    return i_;
  }
  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool at_end() {
    skip_ws();
    return i_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  /// The character after the next one, whitespace skipped before both.
  char peek2() {
    skip_ws();
    std::size_t j = i_ + 1;
    while (j < s_.size() && std::isspace(static_cast<unsigned char>(s_[j]))) ++j;
    return j < s_.size() ? s_[j] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool accept_word(std::string_view w) {
    skip_ws();
    if (s_.substr(i_, w.size()) != w) return false;
    const std::size_t end = i_ + w.size();
    if (end < s_.size() && is_ident_char(s_[end])) return false;
    i_ = end;
    return true;
  }
  bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }
  bool at_ident() {
    const char c = peek();
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  Int integer() {
    skip_ws();
    const std::size_t start = i_;
    bool neg = false;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) neg = s_[i_++] == '-';
    skip_ws();
    const std::size_t digits = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (digits == i_) {
      i_ = start;
      fail("expected an integer");
    }
    Int v(std::string(s_.substr(digits, i_ - digits)));
    return neg ? Int(-v) : v;
  }

  std::uint64_t small(const char* what) {
    const std::size_t at = pos();
    const Int v = integer();
    if (v < 0 || v > Int(UINT32_MAX)) throw ParseError(std::string(what) + " out of range", at);
    return static_cast<std::uint64_t>(v);
  }

  std::string ident() {
    skip_ws();
    const std::size_t start = i_;
    if (!at_ident()) fail("expected an identifier");
    while (i_ < s_.size() && is_ident_char(s_[i_])) ++i_;
    return std::string(s_.substr(start, i_ - start));
  }

  [[noreturn]] void fail(const std::string& what) {
    skip_ws();
    throw ParseError(what, i_);
  }

  void finish() {
    if (!at_end()) fail("unexpected trailing input");
  }

 private:
  static bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
  std::string_view s_;
  std::size_t i_ = 0;
};

inline TowerPtr parse_field(Cursor& in) {
  const std::size_t at = in.pos();
  if (!in.accept_word("GF")) in.fail("expected GF(");
  in.expect('(');
  auto p = in.small("field size");
  std::uint64_t d = 1;
  if (in.accept('^')) {
    d = in.small("field degree");
  } else if (!detail::is_prime(p) && p > 1) {
    // GF(q) with q a prime power
    const auto f = detail::prime_factors(p);
    if (f.size() == 1) {
      d = 0;
      for (auto n = p; n > 1; n /= f.front()) ++d;
      p = f.front();
    }
  }
  in.expect(')');
  std::vector<std::string> vars;
  if (in.accept('(')) {
    do vars.push_back(in.ident());
    while (in.accept(','));
    in.expect(')');
  }
  std::uint32_t mod = TowerField::kIntegral;
  if (in.accept_word("mod")) {
    mod = static_cast<std::uint32_t>(in.small("modulus"));
  } else {
    in.accept_word("integral");
  }
  try {
    if (d == 0 || d > 16) throw DomainError("field degree must be between 1 and 16");
    return make_tower(make_field(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(d)), std::move(vars), mod);
  } catch (const DomainError& e) {
    throw ParseError(e.what(), at);
  }
}

/// A field constant: integer, g, g^k or -1 (possibly preceded by '-').
inline std::uint32_t parse_const(Cursor& in, const FqField& f) {
  bool neg = false;
  if (in.peek() == '-' && in.peek2() == 'g') {
    in.accept('-');
    neg = true;
  }
  std::uint32_t code;
  if (in.accept_word("g")) {
    Int k = 1;
    if (in.accept('^')) k = in.integer();
    code = f.exp(k);
  } else {
    const std::size_t at = in.pos();
    const Int v = in.integer();
    if (f.degree() > 1 && v != 0 && v != 1 && v != -1)
      throw ParseError("write constants of GF(p^d), d > 1, as powers of g", at);
    code = f.from_integer(static_cast<std::int64_t>(mod_floor(v, Int(f.characteristic()))));
  }
  return neg ? f.neg(code) : code;
}

inline UnitElem require_unit_const(const TowerPtr& t, std::uint32_t code, std::size_t at) {
  if (code == 0) throw ParseError("zero is not a unit", at);
  return UnitElem::constant_code(t, code);
}

inline std::size_t lookup_var(const TowerPtr& t, const std::string& name, std::size_t at) {
  auto j = t->var_index(name);
  if (!j) throw ParseError("unknown variable '" + name + "'", at);
  return *j;
}

inline UnitElem parse_factor(Cursor& in, const TowerPtr& t) {
  const auto& f = *t->base();
  const std::size_t at = in.pos();
  UnitElem u = UnitElem::one(t);
  if (in.peek() == '-' && !std::isdigit(static_cast<unsigned char>(in.peek2()))) {
    in.accept('-');
    return UnitElem::minus_one(t) * parse_factor(in, t);
  }
  if (in.accept('(')) {
    const std::size_t vat = in.pos();
    const auto j = lookup_var(t, in.ident(), vat);
    std::uint32_t root = 0;
    if (in.accept('-')) root = parse_const(in, f);
    in.expect(')');
    u = UnitElem::linear(t, j, root);
  } else if (in.accept_word("g")) {
    Int k = 1;
    if (in.accept('^')) k = in.integer();
    return UnitElem::from_dlog(t, mod_floor(k, Int(f.unit_order())));
  } else if (in.at_ident()) {
    const std::size_t vat = in.pos();
    const auto j = lookup_var(t, in.ident(), vat);
    std::uint32_t root = 0;
    if (in.peek() == '-') {
      in.accept('-');
      root = parse_const(in, f);
    }
    u = UnitElem::linear(t, j, root);
  } else if (in.peek() == '-' || in.at_digit()) {
    return require_unit_const(t, parse_const(in, f), at);
  } else {
    in.fail("expected a unit");
  }
  if (in.accept('^')) u = u.pow(in.integer());
  return u;
}

inline UnitElem parse_unit(Cursor& in, const TowerPtr& t) {
  UnitElem u = parse_factor(in, t);
  for (;;) {
    if (in.accept('*'))
      u = u * parse_factor(in, t);
    else if (in.accept('/'))
      u = u / parse_factor(in, t);
    else
      return u;
  }
}

inline Symbol parse_symbol(Cursor& in, const TowerPtr& t) {
  in.expect('{');
  std::vector<UnitElem> e;
  if (!in.accept('}')) {
    do e.push_back(parse_unit(in, t));
    while (in.accept(','));
    in.expect('}');
  }
  return Symbol(std::move(e));
}

using Bindings = std::map<std::string, std::vector<PresentationTerm>>;

/// A signed sum of terms c{...} or c*name, kept in written order.
inline std::vector<PresentationTerm> parse_terms(Cursor& in, const TowerPtr& t, const Bindings* env) {
  std::vector<PresentationTerm> out;
  if (in.peek() == '0' && !std::isdigit(static_cast<unsigned char>(in.peek2())) && in.peek2() != '{' &&
      in.peek2() != '*') {
    in.accept('0');
    return out;
  }
  bool first = true;
  for (;;) {
    Int sign = 1;
    if (in.accept('-'))
      sign = -1;
    else if (!first && !in.accept('+'))
      break;
    else if (first)
      in.accept('+');
    first = false;
    Int c = 1;
    if (in.at_digit()) {
      c = in.integer();
      in.accept('*');
    }
    c *= sign;
    if (in.peek() == '{') {
      out.push_back({c, parse_symbol(in, t)});
    } else if (env && in.at_ident()) {
      const std::size_t at = in.pos();
      const auto name = in.ident();
      auto it = env->find(name);
      if (it == env->end()) throw ParseError("unknown name '" + name + "'", at);
      for (const auto& term : it->second) out.push_back({c * term.coeff, term.symbol});
    } else {
      in.fail("expected a symbol");
    }
  }
  return out;
}

inline std::size_t common_degree(const std::vector<PresentationTerm>& terms, std::size_t at) {
  if (terms.empty()) return 0;
  const auto d = terms.front().symbol.degree();
  for (const auto& x : terms)
    if (x.symbol.degree() != d) throw ParseError("symbols of different degrees", at);
  return d;
}

inline Presentation parse_presentation(Cursor& in, const TowerPtr& t, const Bindings* env) {
  const std::size_t at = in.pos();
  std::vector<PresentationTerm> all;
  if (in.accept('[')) {
    if (!in.accept(']')) {
      do {
        auto part = parse_terms(in, t, env);
        all.insert(all.end(), part.begin(), part.end());
      } while (in.accept(';'));
      in.expect(']');
    }
  } else {
    all = parse_terms(in, t, env);
  }
  Presentation p(t, common_degree(all, at));
  for (const auto& x : all) p.push(x.coeff, x.symbol);
  return p;
}

}  // namespace detail

inline TowerPtr parse_field(std::string_view text) {
  detail::Cursor in(text);
  auto t = detail::parse_field(in);
  in.finish();
  return t;
}

inline UnitElem parse_unit(std::string_view text, const TowerPtr& t) {
  detail::Cursor in(text);
  auto u = detail::parse_unit(in, t);
  in.finish();
  return u;
}

/// A field element written as a constant (integer, g^k, -1); zero allowed.
inline std::uint32_t parse_constant(std::string_view text, const FqField& f) {
  detail::Cursor in(text);
  auto c = detail::parse_const(in, f);
  in.finish();
  return c;
}

inline Presentation parse_presentation(std::string_view text, const TowerPtr& t) {
  detail::Cursor in(text);
  auto p = detail::parse_presentation(in, t, nullptr);
  in.finish();
  return p;
}

inline KChain parse_chain(std::string_view text, const TowerPtr& t) { return parse_presentation(text, t).chain(); }

// ---------------------------------------------------------------------------
// Printing

inline std::string format_constant(const FqField& f, std::uint32_t code) {
  if (code == 0) return "0";
  if (f.degree() == 1) return std::to_string(code);
  const auto k = f.dlog(code);
  if (k == 0) return "1";
  return k == 1 ? "g" : "g^" + std::to_string(k);
}

inline std::string format_unit(const UnitElem& u) {
  const auto& t = *u.tower();
  const auto& f = *t.base();
  std::vector<std::string> parts;
  const auto c = u.const_dlog();
  if (c != 0) parts.push_back(c == 1 ? "g" : "g^" + to_string(c));
  for (const auto& x : u.factors()) {
    std::string s = x.root == 0 ? t.var(x.var) : "(" + t.var(x.var) + "-" + format_constant(f, x.root) + ")";
    if (x.exp != 1) s += "^" + to_string(x.exp);
    parts.push_back(std::move(s));
  }
  if (parts.empty()) return "1";
  std::string out = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) out += " * " + parts[k];
  return out;
}

inline std::string format_symbol(const Symbol& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.degree(); ++k) out += (k ? ", " : "") + format_unit(s[k]);
  return out + "}";
}

namespace detail {

inline void append_term(std::string& out, const Int& c, const Symbol& s, bool first) {
  const Int a = abs(c);
  if (c < 0)
    out += first ? "-" : " - ";
  else if (!first)
    out += " + ";
  if (a != 1) out += to_string(a);
  out += format_symbol(s);
}

}  // namespace detail

inline std::string format_chain(const KChain& x) {
  if (x.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [s, c] : x.terms()) {
    detail::append_term(out, c, s, first);
    first = false;
  }
  return out;
}

inline std::string format_presentation(const Presentation& p) {
  std::string out = "[";
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) out += "; ";
    detail::append_term(out, p[k].coeff, p[k].symbol, true);
  }
  return out + "]";
}

inline std::string format_place(const TowerField& t, const Place& P) {
  const auto& name = t.var(top_var(t));
  return P.infinite ? name + "=inf" : name + "=" + format_constant(*t.base(), P.root);
}

namespace detail {

inline Place parse_place(Cursor& in, const TowerPtr& t) {
  const std::size_t at = in.pos();
  const auto name = in.ident();
  const auto j = lookup_var(t, name, at);
  if (j != top_var(*t)) throw ParseError("places are taken on the top variable '" + t->var(top_var(*t)) + "'", at);
  in.expect('=');
  if (in.accept_word("inf")) return Place::infinity();
  return Place::finite(parse_const(in, *t->base()));
}

}  // namespace detail

/// "t=<const>" or "t=inf"; the variable must be the top one.
inline Place parse_place(std::string_view text, const TowerPtr& t) {
  detail::Cursor in(text);
  auto P = detail::parse_place(in, t);
  in.finish();
  return P;
}

// ---------------------------------------------------------------------------
// Scripts
//
//   # comment
//   field GF(7)(t,u,v) mod 2
//   let x = [{t,u}; {t,v}]
//   normalize x
//   equal {t,u} == -{u,t}
//   residue {t, t-2} at t=0
//   specialize x at v=inf by v^-1
//   gamma 2 x
//
// One statement per line. The field line comes first; names are bound by let
// before use and may not be rebound.

struct ScriptCommand {
  std::string verb;
  std::size_t line = 0;
  std::vector<Presentation> args;
  std::optional<Place> place;
  std::optional<UnitElem> uniformizer;
  std::int64_t n = 0;
};

struct Script {
  TowerPtr field;
  std::vector<ScriptCommand> commands;
};

namespace detail {

inline ScriptCommand parse_command(Cursor& in, const std::string& verb, std::size_t at, const TowerPtr& t,
                                   const Bindings& env) {
  ScriptCommand c;
  c.verb = verb;
  auto expr = [&] { return parse_presentation(in, t, &env); };
  if (verb == "normalize" || verb == "print") {
    c.args.push_back(expr());
  } else if (verb == "equal") {
    c.args.push_back(expr());
    in.expect('=');
    in.expect('=');
    c.args.push_back(expr());
  } else if (verb == "residue" || verb == "specialize") {
    c.args.push_back(expr());
    if (!in.accept_word("at")) in.fail("expected 'at'");
    c.place = parse_place(in, t);
    if (verb == "specialize" && in.accept_word("by")) c.uniformizer = parse_unit(in, t);
  } else if (verb == "gamma") {
    const std::size_t nat = in.pos();
    const Int n = in.integer();
    if (n < 0 || n > 64) throw ParseError("divided power index out of range", nat);
    c.n = static_cast<std::int64_t>(n);
    c.args.push_back(expr());
  } else {
    throw ParseError("unknown command '" + verb + "'", at);
  }
  return c;
}

}  // namespace detail

inline Script parse_script(std::string_view text) {
  Script s;
  detail::Bindings env;
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::size_t offset = start;
    start = end + 1;
    detail::Cursor in(line);
    if (in.at_end()) continue;
    try {
      const std::size_t at = in.pos();
      const auto word = in.ident();
      if (word == "field") {
        if (s.field) throw ParseError("field declared twice", at);
        s.field = detail::parse_field(in);
      } else if (!s.field) {
        throw ParseError("the first statement must declare the field", at);
      } else if (word == "let") {
        const std::size_t nat = in.pos();
        const auto name = in.ident();
        if (env.count(name)) throw ParseError("name '" + name + "' is already bound", nat);
        in.expect('=');
        auto p = detail::parse_presentation(in, s.field, &env);
        env[name] = p.terms();
      } else {
        auto c = detail::parse_command(in, word, at, s.field, env);
        c.line = line_no;
        s.commands.push_back(std::move(c));
      }
      in.finish();
    } catch (const ParseError& e) {
      std::string what = e.what();
      what = what.substr(0, what.rfind(" at position "));
      throw ParseError("line " + std::to_string(line_no) + ": " + what, offset + e.position());
    }
  }
  if (!s.field) throw ParseError("script declares no field", 0);
  return s;
}

}  // namespace milnor

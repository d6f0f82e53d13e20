// mk: command line front end.
//
// Exit codes: 0 success / equal / pass, 1 unequal / fail, 2 usage, parse or
// domain error.

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "milnor/dsl.hpp"
#include "milnor/operations.hpp"
#include "milnor/serialize.hpp"
#include "milnor/suite.hpp"

using namespace milnor;

namespace {

struct Options {
  std::string field, expr, lhs, rhs, at, uniformizer, form, op_spec, script, profile = "all";
  std::int64_t n = 2;
  std::uint64_t seed = 0;
  std::size_t cases = 100, i = 2, moves = 10;
  bool json = false, serial = false;
};

TowerPtr need_field(const Options& o) {
  if (o.field.empty()) throw CLI::RequiredError("--field");
  return parse_field(o.field);
}

std::string need(const std::string& value, const char* flag) {
  if (value.empty()) throw CLI::RequiredError(flag);
  return value;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int emit(const Options& o, const Json& j, const std::string& text, int code = 0) {
  if (o.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
  return code;
}

Json base_json(const char* command, const TowerPtr& t) {
  return Json{{"command", command}, {"field", t->describe()}, {"header", tower_header(*t)}};
}

Json nf_json(const KChain& x) { return to_json(normal_form(x), *x.tower()->base()); }

int cmd_normalize(const Options& o) {
  const auto t = need_field(o);
  const auto x = parse_chain(need(o.expr, "--expr"), t);
  const auto nf = normal_form(x);
  auto j = base_json("normalize", t);
  j["input"] = to_json(x);
  j["zero"] = nf.is_zero();
  j["normal_form"] = to_json(nf, *t->base());
  return emit(o, j, std::string(nf.is_zero() ? "zero\n" : "nonzero\n") + format_normal_form(nf, *t));
}

int cmd_equal(const Options& o) {
  const auto t = need_field(o);
  const auto a = parse_chain(need(o.lhs, "--lhs"), t);
  const auto b = parse_chain(need(o.rhs, "--rhs"), t);
  const bool eq = equal(a, b);
  auto j = base_json("equal", t);
  j["lhs"] = to_json(a);
  j["rhs"] = to_json(b);
  j["equal"] = eq;
  std::string text = eq ? "equal\n" : "not equal\n";
  if (!eq && (a.degree() == b.degree() || a.empty() || b.empty())) {
    const auto diff = a.empty() ? -b : a - b;
    j["difference"] = nf_json(diff);
    text += "difference:\n" + format_normal_form(normal_form(diff), *t, "  ");
  }
  return emit(o, j, text, eq ? 0 : 1);
}

int cmd_residue(const Options& o) {
  const auto t = need_field(o);
  const auto x = parse_chain(need(o.expr, "--expr"), t);
  const auto P = parse_place(need(o.at, "--at"), t);
  const auto r = residue(x, P);
  auto j = base_json("residue", t);
  j["place"] = format_place(*t, P);
  j["residue"] = to_json(r);
  j["normal_form"] = nf_json(r);
  return emit(o, j, format_chain(detail::prune(r)) + "\n");
}

int cmd_specialize(const Options& o) {
  const auto t = need_field(o);
  const auto x = parse_chain(need(o.expr, "--expr"), t);
  const auto P = parse_place(need(o.at, "--at"), t);
  const auto pi = o.uniformizer.empty() ? uniformizer(t, P) : parse_unit(o.uniformizer, t);
  const auto s = specialize(x, P, pi);
  auto j = base_json("specialize", t);
  j["place"] = format_place(*t, P);
  j["uniformizer"] = format_unit(pi);
  j["result"] = to_json(s);
  j["normal_form"] = nf_json(s);
  return emit(o, j, format_chain(detail::prune(s)) + "\n");
}

int cmd_gamma(const Options& o) {
  const auto t = need_field(o);
  const auto p = parse_presentation(need(o.expr, "--expr"), t);
  const auto g = gamma(o.n, p);
  const auto reg = regime(p.degree(), *t, o.n);
  auto j = base_json("gamma", t);
  j["n"] = o.n;
  j["presentation"] = format_presentation(p);
  j["regime"] = to_string(reg);
  j["presentation_independent"] = reg != Regime::none;
  j["result"] = to_json(g);
  j["normal_form"] = nf_json(g);
  std::string text = format_chain(g) + "\nregime: " + to_string(reg) + "\n";
  if (reg == Regime::none) text += "note: gamma_" + std::to_string(o.n) + " depends on the presentation here\n";
  return emit(o, j, text);
}

DiagonalForm parse_form(std::string text, const TowerPtr& t) {
  if (!text.empty() && text.front() == '<' && text.back() == '>') text = text.substr(1, text.size() - 2);
  DiagonalForm q{t, {}};
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) q.entries.push_back(parse_unit(part, t));
  return q;
}

int cmd_sw(const Options& o) {
  const auto t = need_field(o);
  const auto q = parse_form(need(o.form.empty() ? o.expr : o.form, "--form"), t);
  const auto w = sw_total(q);
  const auto rep = sw_identities_check(q);
  auto j = base_json("sw", t);
  Json classes = Json::array();
  std::string text;
  for (std::size_t k = 0; k < w.size(); ++k) {
    classes.push_back(to_json(w[k]));
    text += "w" + std::to_string(k) + " = " + format_chain(w[k]) + (is_zero(w[k]) ? "  (zero)" : "") + "\n";
  }
  Json ids = Json::array();
  for (const auto& id : rep.identities) {
    ids.push_back(Json{{"identity", id.name}, {"holds", id.holds}});
    text += id.name + ": " + (id.holds ? "holds" : "fails") + "\n";
  }
  j["classes"] = classes;
  j["identities"] = ids;
  return emit(o, j, text, rep.all_hold() ? 0 : 1);
}

OperationSpec load_op_spec(const std::string& path) {
  const auto j = nlohmann::json::parse(read_file(path));
  OperationSpec spec;
  spec.i = j.at("i").get<std::size_t>();
  spec.base = parse_field(j.at("field").get<std::string>());
  for (const auto& [k, v] : j.at("coeffs").items()) {
    std::size_t r = 0;
    const auto [end, ec] = std::from_chars(k.data(), k.data() + k.size(), r);
    if (ec != std::errc() || end != k.data() + k.size()) throw DomainError("coefficient key '" + k + "' is not an index");
    spec.coeffs.emplace(r, parse_chain(v.get<std::string>(), spec.base));
  }
  return spec;
}

int cmd_validate_op(const Options& o) {
  const auto spec = load_op_spec(need(o.op_spec, "--op-spec"));
  const auto rep = validate_operation_spec(spec);
  auto j = base_json("validate-op", spec.base);
  j["i"] = spec.i;
  j["valid"] = rep.ok();
  j["violations"] = rep.violations;
  std::string text = rep.ok() ? "valid\n" : "invalid\n";
  for (const auto& v : rep.violations) text += "  " + v + "\n";
  if (rep.ok() && !o.expr.empty()) {
    const auto t = need_field(o);
    const auto value = evaluate_operation(spec, parse_presentation(o.expr, t));
    Json out = Json::object();
    for (const auto& [d, c] : value) {
      out[std::to_string(d)] = to_json(c);
      text += "degree " + std::to_string(d) + ": " + format_chain(c) + "\n";
    }
    j["value"] = out;
  }
  return emit(o, j, text, rep.ok() ? 0 : 1);
}

int cmd_suite(const Options& o) {
  SuiteConfig cfg;
  cfg.profile = o.profile;
  cfg.tower = need_field(o);
  cfg.i = o.i;
  cfg.cases = o.cases;
  cfg.seed = o.seed;
  cfg.moves = o.moves;
  cfg.parallel = !o.serial;
  const auto rep = run_suite(cfg);
  return emit(o, to_json(rep), format_report(rep), rep.ok() ? 0 : 1);
}

int cmd_run(const Options& o) {
  const auto s = parse_script(read_file(o.script));
  const auto& t = s.field;
  Json results = Json::array();
  std::string text;
  int code = 0;
  for (const auto& c : s.commands) {
    Json r{{"line", c.line}, {"command", c.verb}};
    std::string out;
    const auto x = c.args.front().chain();
    if (c.verb == "print") {
      r["value"] = to_json(x);
      out = format_chain(x);
    } else if (c.verb == "normalize") {
      const auto nf = normal_form(x);
      r["zero"] = nf.is_zero();
      r["normal_form"] = to_json(nf, *t->base());
      out = nf.is_zero() ? "zero" : "nonzero";
    } else if (c.verb == "equal") {
      const bool eq = equal(x, c.args[1].chain());
      r["equal"] = eq;
      out = eq ? "equal" : "not equal";
      if (!eq) code = 1;
    } else if (c.verb == "residue") {
      const auto v = residue(x, *c.place);
      r["value"] = to_json(v);
      out = format_chain(detail::prune(v));
    } else if (c.verb == "specialize") {
      const auto v = specialize(x, *c.place, c.uniformizer ? *c.uniformizer : uniformizer(t, *c.place));
      r["value"] = to_json(v);
      out = format_chain(detail::prune(v));
    } else if (c.verb == "gamma") {
      const auto reg = regime(c.args.front().degree(), *t, c.n);
      const auto v = gamma(c.n, c.args.front());
      r["regime"] = to_string(reg);
      r["value"] = to_json(v);
      out = format_chain(v) + "  [regime " + to_string(reg) + "]";
    }
    text += std::to_string(c.line) + ": " + c.verb + " -> " + out + "\n";
    results.push_back(std::move(r));
  }
  auto j = base_json("run", t);
  j["results"] = results;
  return emit(o, j, text, code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Milnor K-theory of finite fields and rational function fields"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value defaults, e.g. field = \"GF(5)(t) mod 2\"; [suite] sections");
  Options o;
  app.add_option("--field", o.field, "Field, e.g. \"GF(5)(t,u) mod 2\"");
  app.add_flag("--json", o.json, "Emit JSON");

  auto* normalize = app.add_subcommand("normalize", "Normal form of a chain");
  normalize->add_option("--expr", o.expr, "Chain")->required();
  auto* eq = app.add_subcommand("equal", "Compare two chains (exit 0 equal, 1 unequal)");
  eq->add_option("--lhs", o.lhs)->required();
  eq->add_option("--rhs", o.rhs)->required();
  auto* res = app.add_subcommand("residue", "Residue at a place of the top variable");
  res->add_option("--expr", o.expr)->required();
  res->add_option("--at", o.at, "t=<const> or t=inf")->required();
  auto* spec = app.add_subcommand("specialize", "Specialization at a place");
  spec->add_option("--expr", o.expr)->required();
  spec->add_option("--at", o.at)->required();
  spec->add_option("--uniformizer", o.uniformizer, "Defaults to t-a, or t^-1 at infinity");
  auto* gam = app.add_subcommand("gamma", "Divided power of a presentation");
  gam->add_option("--expr", o.expr, "Presentation, e.g. \"[{t,u}; {t,v}]\"")->required();
  gam->add_option("-n", o.n)->check(CLI::NonNegativeNumber);
  auto* sw = app.add_subcommand("sw", "Stiefel-Whitney classes of a diagonal form");
  sw->add_option("--form,--expr", o.form, "Entries, e.g. \"<t, u, -1>\"")->required();
  auto* val = app.add_subcommand("validate-op", "Check an operation spec; evaluate it with --expr");
  val->add_option("--op-spec", o.op_spec, "JSON file")->required();
  val->add_option("--expr", o.expr, "Presentation over --field");
  auto* suite = app.add_subcommand("suite", "Seeded property suite");
  suite->add_option("--profile", o.profile)->capture_default_str();
  suite->add_option("--i", o.i, "Source degree")->capture_default_str();
  suite->add_option("--cases", o.cases)->capture_default_str();
  suite->add_option("--moves", o.moves, "Presentation moves per case")->capture_default_str();
  suite->add_option("--seed", o.seed)->envname("MK_SEED")->capture_default_str();
  suite->add_flag("--serial", o.serial, "Run cases on one thread");
  auto* run = app.add_subcommand("run", "Execute a script");
  run->add_option("script", o.script)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const auto& name = sub->get_name();
    if (name == "normalize") return cmd_normalize(o);
    if (name == "equal") return cmd_equal(o);
    if (name == "residue") return cmd_residue(o);
    if (name == "specialize") return cmd_specialize(o);
    if (name == "gamma") return cmd_gamma(o);
    if (name == "sw") return cmd_sw(o);
    if (name == "validate-op") return cmd_validate_op(o);
    if (name == "suite") return cmd_suite(o);
    if (name == "run") return cmd_run(o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}

#pragma once

// Seeded property suites. A suite runs a list of laws over one tower; every
// case draws from its own generator Xoshiro256::for_case(seed, law, index), so
// reports do not depend on scheduling.

#include <algorithm>
#include <functional>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "milnor/operations.hpp"
#include "milnor/serialize.hpp"

namespace milnor {

struct LawOutcome {
  bool holds = true;
  bool skipped = false;
  Json witness;  // filled when the law fails on this case
};

struct LawContext {
  TowerPtr tower;
  std::size_t i = 2;
  Regime regime = Regime::none;
  std::size_t moves = 10;
  /// Exponents +-1 and up to three linear factors: symbols built from such
  /// units are far more often nonzero than with higher exponents.
  UnitShape shape{3, 1, 3, 0};
  NfOptions nf;
};

using LawFn = std::function<LawOutcome(const LawContext&, Xoshiro256&)>;

struct Law {
  std::string name;
  LawFn run;
  /// The law is known to fail here; the suite succeeds if a failure is found.
  bool expect_counterexample = false;
  /// Deterministic fixtures need a single case.
  bool fixture = false;
  /// Reason the law does not apply to this profile (reported, not run).
  std::string skip_reason;
};

namespace laws {

inline LawOutcome fail(Json witness) { return {false, false, std::move(witness)}; }
inline LawOutcome skip() { return {true, true, {}}; }

inline Json nf_json(const KChain& x, const NfOptions& opt) { return to_json(normal_form(x, opt), *x.tower()->base()); }

inline Json compare(const KChain& lhs, const KChain& rhs, const NfOptions& opt) {
  return Json{{"lhs", format_chain(lhs)}, {"rhs", format_chain(rhs)}, {"nf_lhs", nf_json(lhs, opt)}, {"nf_rhs", nf_json(rhs, opt)}};
}

/// Checks lhs == rhs at normal-form level and returns a witness otherwise.
inline LawOutcome expect_equal(const KChain& lhs, const KChain& rhs, const NfOptions& opt, Json extra = Json::object()) {
  if (equal(lhs, rhs, opt)) return {};
  Json w = std::move(extra);
  const Json cmp = compare(lhs, rhs, opt);
  for (const auto& [k, v] : cmp.items()) w[k] = v;
  return fail(std::move(w));
}

inline KChain power(const KChain& x, std::size_t n) {
  KChain r = KChain::unit(x.tower());
  for (std::size_t k = 0; k < n; ++k) r = r * x;
  return r;
}

inline Presentation random_pres(const LawContext& c, Xoshiro256& rng, std::size_t max_terms = 3) {
  return random_presentation(c.tower, c.i, 1 + rng.below(max_terms), rng, c.shape);
}

inline LawOutcome steinberg(const LawContext& c, Xoshiro256& rng) {
  const auto& T = c.tower;
  const auto u = random_steinberg_unit(T, rng, c.shape);
  const auto st = KChain::of(T, Symbol({u, *one_minus(u)}));
  const auto z1 = random_chain(T, rng.below(2), 1 + rng.below(2), rng, c.shape);
  const auto z2 = random_chain(T, rng.below(2), 1, rng, c.shape);
  const auto x = z1 * st * z2;
  if (is_zero(x, c.nf)) return {};
  return fail(Json{{"u", format_unit(u)}, {"chain", format_chain(x)}, {"nf", nf_json(x, c.nf)}});
}

inline LawOutcome commutativity(const LawContext& c, Xoshiro256& rng) {
  const auto& T = c.tower;
  const auto x = random_unit(T, rng, c.shape), y = random_unit(T, rng, c.shape);
  auto r = expect_equal(KChain::of(T, Symbol({x, y})), KChain::of(T, Symbol({y, x}), -1), c.nf,
                        Json{{"relation", "{x,y} = -{y,x}"}});
  if (!r.holds) return r;
  return expect_equal(KChain::of(T, Symbol({x, x})), KChain::of(T, Symbol({x, UnitElem::minus_one(T)})), c.nf,
                      Json{{"relation", "{x,x} = {x,-1}"}});
}

inline LawOutcome exactness(const LawContext& c, Xoshiro256& rng) {
  const auto& T = c.tower;
  const auto K = T->drop_top();
  const auto b = random_chain(K, rng.below(3), 1 + rng.below(2), rng, c.shape);
  const auto x = inject(b, T);
  if (b.degree() > 0)
    for (std::uint32_t k = 0; k < std::min<std::uint32_t>(T->base()->order(), 4); ++k) {
      const auto r = k == 0 ? 0 : T->base()->exp(std::uint64_t(k - 1));
      const auto d = residue(x, Place::finite(r));
      if (!is_zero(d, c.nf))
        return fail(Json{{"relation", "residue of an injected element"}, {"b", format_chain(b)}, {"residue", format_chain(d)}});
    }
  auto out = expect_equal(s_infinity(x), b, c.nf, Json{{"relation", "s_inf(inject(b)) = b"}});
  if (!out.holds) return out;
  const auto a = random_chain(K, 1 + rng.below(2), 1 + rng.below(2), rng, c.shape);
  if (is_zero(a, c.nf)) return out;
  const auto y = KChain::of(UnitElem::linear(T, top_var(*T), 0)) * inject(a, T);
  if (is_zero(y, c.nf)) return fail(Json{{"relation", "{t} . a != 0"}, {"a", format_chain(a)}});
  return expect_equal(residue(y, Place::finite(0)), a, c.nf, Json{{"relation", "d_0({t} . a) = a"}});
}

/// s_{PQ}(x) = s_P(x) - s_P({Q}) . d_P(x); the printed variant with {-Q}
/// differs from s_{PQ}(x) by exactly {-1} . d_P(x).
inline LawOutcome uniformizer_change(const LawContext& c, Xoshiro256& rng) {
  const auto& T = c.tower;
  const auto& f = *T->base();
  const auto k = rng.below(std::min<std::uint32_t>(f.order(), 5));
  const auto P = Place::finite(k == 0 ? 0 : f.exp(std::uint64_t(k - 1)));
  const auto pi = uniformizer(T, P);
  UnitElem Q = random_unit(T, rng, c.shape);
  Q = Q / pi.pow(valuation(Q, P));
  if (Q.is_one()) Q = UnitElem::from_dlog(T, 1) * Q;
  const auto x = random_chain(T, 1 + rng.below(3), 1 + rng.below(2), rng, c.shape);
  const auto lhs = specialize(x, P, pi * Q);
  const auto d = residue(x, P);
  const auto base = specialize(x, P, pi);
  Json ctx{{"x", format_chain(x)}, {"P", format_place(*T, P)}, {"Q", format_unit(Q)}};
  ctx["relation"] = "s_PQ(x) = s_P(x) - s_P({Q}) . d_P(x)";
  auto out = expect_equal(lhs, base - specialize(KChain::of(Q), P, pi) * d, c.nf, ctx);
  if (!out.holds) return out;
  const auto literal = base - specialize(KChain::of(UnitElem::minus_one(T) * Q), P, pi) * d;
  ctx["relation"] = "s_PQ(x) - [s_P(x) - s_P({-Q}) . d_P(x)] = {-1} . d_P(x)";
  return expect_equal(lhs - literal, KChain::of(UnitElem::minus_one(T->drop_top())) * d, c.nf, ctx);
}

inline LawOutcome gamma_unit(const LawContext& c, Xoshiro256& rng) {
  const auto x = random_pres(c, rng, 4);
  const auto g0 = gamma(0, x), g1 = gamma(1, x);
  if (g0 == KChain::unit(c.tower) && g1 == x.chain()) return {};
  return fail(Json{{"presentation", format_presentation(x)}, {"gamma_0", format_chain(g0)}, {"gamma_1", format_chain(g1)}});
}

/// gamma_n applied to the entrywise product s . x equals s^n . gamma_n(x); s
/// has even degree unless p = 2.
inline LawOutcome gamma_scalar(const LawContext& c, Xoshiro256& rng) {
  const auto x = random_pres(c, rng);
  const std::size_t e = c.tower->modulus() == 2 ? 1 + rng.below(2) : 2;
  const auto s = random_symbol(c.tower, e, rng, c.shape);
  Presentation sx(c.tower, c.i + e);
  for (const auto& t : x.terms()) sx.push(t.coeff, s * t.symbol);
  const auto n = static_cast<std::int64_t>(2 + rng.below(2));
  return expect_equal(gamma(n, sx), power(KChain::of(c.tower, s), n) * gamma(n, x), c.nf,
                      Json{{"presentation", format_presentation(x)}, {"s", format_symbol(s)}, {"n", n}});
}

inline LawOutcome gamma_product(const LawContext& c, Xoshiro256& rng) {
  const auto x = random_pres(c, rng, 4);
  static constexpr std::pair<unsigned, unsigned> kPairs[] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {1, 3}};
  const auto [m, n] = kPairs[rng.below(std::size(kPairs))];
  return expect_equal(gamma(m, x) * gamma(n, x), gamma(m + n, x).scaled(binomial(m + n, n)), c.nf,
                      Json{{"presentation", format_presentation(x)}, {"m", m}, {"n", n}});
}

/// Exact at presentation level in every regime.
inline LawOutcome gamma_sum(const LawContext& c, Xoshiro256& rng) {
  const auto x = random_pres(c, rng), y = random_pres(c, rng);
  const auto n = static_cast<std::int64_t>(rng.below(4));
  KChain rhs(c.tower, static_cast<std::size_t>(n) * c.i);
  for (std::int64_t j = 0; j <= n; ++j) rhs += gamma(j, x) * gamma(n - j, y);
  const auto lhs = gamma(n, concat(x, y));
  Json ctx{{"x", format_presentation(x)}, {"y", format_presentation(y)}, {"n", n}};
  if (!(lhs == rhs)) {
    ctx["relation"] = "chain-level equality";
    return fail(ctx);
  }
  return expect_equal(lhs, rhs, c.nf, ctx);
}

inline LawOutcome gamma_compose(const LawContext& c, Xoshiro256& rng) {
  static constexpr std::pair<unsigned, unsigned> kPairs[] = {{1, 2}, {2, 1}, {2, 2}, {1, 3}, {3, 1},
                                                             {2, 3}, {3, 2}, {2, 4}, {4, 2}};
  const auto [n, m] = kPairs[rng.below(std::size(kPairs))];
  const auto x = random_pres(c, rng, n * m > 4 ? 3 : 4);
  const auto gn = gamma_presentation(n, x);
  const Int coeff = factorial(n * m) / (factorial(m) * int_pow(factorial(n), m));
  return expect_equal(gamma(m, gn), gamma(n * m, x).scaled(coeff), c.nf,
                      Json{{"presentation", format_presentation(x)}, {"n", n}, {"m", m}});
}

inline LawOutcome gamma_symbol(const LawContext& c, Xoshiro256& rng) {
  Presentation x(c.tower, c.i);
  x.push(random_coeff(rng, 3), random_symbol(c.tower, c.i, rng, c.shape));
  const auto n = static_cast<std::int64_t>(2 + rng.below(3));
  const auto g = gamma(n, x);
  if (g.empty()) return {};
  return fail(Json{{"presentation", format_presentation(x)}, {"n", n}, {"gamma", format_chain(g)}});
}

inline LawOutcome invariance(const LawContext& c, Xoshiro256& rng) {
  const auto x = random_pres(c, rng);
  const auto moved = presentation_moves(x, rng, c.moves, c.shape);
  Json ctx{{"presentation", format_presentation(x)}, {"moved", format_presentation(moved.pres)}, {"move_trace", moved.trace}};
  if (!equal(x.chain(), moved.pres.chain(), c.nf)) {
    ctx["relation"] = "moves preserve the class";
    return fail(ctx);
  }
  for (std::int64_t n : {2, 3}) {
    ctx["n"] = n;
    auto r = expect_equal(gamma(n, x), gamma(n, moved.pres), c.nf, ctx);
    if (!r.holds) return r;
  }
  return {};
}

/// A coefficient y over F_q satisfying the weak divided power side condition.
inline std::optional<KChain> kernel_coefficient(const LawContext& c, Xoshiro256& rng) {
  const auto k0 = c.tower->prefix(0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const auto y = rng.coin() ? KChain::of(k0, Symbol{}, random_coeff(rng, 3))
                              : KChain::of(UnitElem::from_dlog(k0, Int(1 + rng.below(k0->base()->unit_order()))));
    if (!is_zero(y) && !weak_gamma_violation(c.i, y)) return y;
  }
  return std::nullopt;
}

inline LawOutcome weak_invariance(const LawContext& c, Xoshiro256& rng) {
  const auto y = kernel_coefficient(c, rng);
  if (!y) return skip();
  const auto x = random_pres(c, rng);
  const auto moved = presentation_moves(x, rng, c.moves, c.shape);
  Json ctx{{"y", format_chain(*y)}, {"presentation", format_presentation(x)}, {"moved", format_presentation(moved.pres)},
           {"move_trace", moved.trace}};
  for (std::int64_t n : {2, 3}) {
    ctx["n"] = n;
    auto r = expect_equal(weak_gamma(*y, n, x), weak_gamma(*y, n, moved.pres), c.nf, ctx);
    if (!r.holds) return r;
  }
  return {};
}

/// [{t,u}, {t,v}] and [{t,uv}] present the same element; gamma_2 separates them
/// by {-1,t,u,v}, which is nonzero when -1 is not a square (mod 2).
struct ObstructionFixture {
  Presentation p1, p2;
  KChain witness;
};

inline ObstructionFixture obstruction_fixture(const TowerPtr& T) {
  const auto t = UnitElem::linear(T, 0, 0), u = UnitElem::linear(T, 1, 0), v = UnitElem::linear(T, 2, 0);
  ObstructionFixture f{Presentation(T, 2), Presentation(T, 2), KChain::of(T, Symbol({UnitElem::minus_one(T), t, u, v}))};
  f.p1.push(1, Symbol({t, u}));
  f.p1.push(1, Symbol({t, v}));
  f.p2.push(1, Symbol({t, u * v}));
  return f;
}

inline LawOutcome obstruction(const LawContext& c, Xoshiro256&) {
  const auto f = obstruction_fixture(c.tower);
  const auto diff = gamma(2, f.p1) - gamma(2, f.p2);
  Json w{{"presentation", format_presentation(f.p1)}, {"moved", format_presentation(f.p2)},
         {"move_trace", Json::array({"split term 0 entry 1"})}};
  w["nf_lhs"] = nf_json(gamma(2, f.p1), c.nf);
  w["nf_rhs"] = nf_json(gamma(2, f.p2), c.nf);
  w["difference_equals_witness"] = equal(diff, f.witness, c.nf);
  w["witness"] = format_chain(f.witness);
  // The law "gamma_2 is presentation independent" holds iff diff is zero.
  if (is_zero(diff, c.nf)) return {};
  if (!w["difference_equals_witness"].get<bool>()) return {true, false, w};
  return fail(w);
}

inline LawOutcome obstruction_weak(const LawContext& c, Xoshiro256&) {
  const auto f = obstruction_fixture(c.tower);
  const auto y = KChain::of(UnitElem::minus_one(c.tower->prefix(0)));
  if (auto why = weak_gamma_violation(2, y)) return fail(Json{{"y", format_chain(y)}, {"violation", *why}});
  return expect_equal(weak_gamma(y, 2, f.p1), weak_gamma(y, 2, f.p2), c.nf,
                      Json{{"y", format_chain(y)}, {"presentation", format_presentation(f.p1)},
                           {"moved", format_presentation(f.p2)}});
}

inline LawOutcome stiefel_whitney(const LawContext& c, Xoshiro256& rng) {
  DiagonalForm q{c.tower, {}};
  const auto r = 1 + rng.below(6);
  for (std::size_t k = 0; k < r; ++k) q.entries.push_back(random_unit(c.tower, rng, c.shape));
  const auto rep = sw_identities_check(q, c.nf);
  if (rep.all_hold()) return {};
  Json failed = Json::array();
  for (const auto& id : rep.identities)
    if (!id.holds) failed.push_back(id.name);
  Json form = Json::array();
  for (const auto& a : q.entries) form.push_back(format_unit(a));
  return fail(Json{{"form", form}, {"failed", failed}});
}

/// Over F_q: every {g^a, g^b, ...} has zero normal form (all tuples), and
/// {g, g} = 0 follows from the relations: for odd q pick a and 1 - a both
/// non-squares, so {a, 1-a} = rs{g,g} with rs odd while 2{g,g} = {g, 1} = 0.
inline LawOutcome vanishing(const LawContext& c, Xoshiro256& rng) {
  const auto& T = c.tower;
  NfOptions full = c.nf;
  full.degree_shortcut = false;
  if (T->num_vars() > 0) {
    const auto n = T->num_vars() + 2;
    const auto x = random_chain(T, n, 1 + rng.below(2), rng, c.shape);
    if (is_zero(x, full)) return {};
    return fail(Json{{"chain", format_chain(x)}, {"nf", nf_json(x, full)}});
  }
  const auto& f = *T->base();
  Json w = Json::object();
  if (f.characteristic() != 2) {
    std::optional<std::uint32_t> cert;
    for (std::uint32_t a = 2; a < f.order() && !cert; ++a)
      if (f.sub(1, a) != 0 && !f.is_square(a) && !f.is_square(f.sub(1, a))) cert = a;
    if (!cert) return fail(Json{{"certificate", "no a with a and 1-a non-squares"}});
    w["certificate"] = Json{{"a", constant_json(f, *cert)}, {"one_minus_a", constant_json(f, f.sub(1, *cert))}};
  }
  for (std::size_t n = 2; n <= (f.order() <= 16 ? 3u : 2u); ++n)
    if (!vanishing_check_exhaustive(T, n)) {
      w["degree"] = n;
      return fail(w);
    }
  return {};
}

inline LawOutcome validate_rejects_non_kernel(const LawContext&, Xoshiro256&) {
  const auto k0 = make_tower(make_field(7), {}, 2);
  OperationSpec bad{2, k0, {{2, KChain::unit(k0)}}};
  OperationSpec good{2, k0, {{2, KChain::of(UnitElem::minus_one(k0))}}};
  const auto rb = validate_operation_spec(bad), rg = validate_operation_spec(good);
  const bool ok = !rb.ok() && rb.violations.front().find("ker τ_2") != std::string::npos && rg.ok();
  if (ok) return {};
  return fail(Json{{"rejected_y2_1", !rb.ok()}, {"accepted_y2_minus_one", rg.ok()}});
}

inline LawOutcome validate_rejects_odd_degree(const LawContext&, Xoshiro256&) {
  const auto k0 = make_tower(make_field(7), {}, 3);
  OperationSpec bad{3, k0, {{2, KChain::unit(k0)}}};
  OperationSpec fine{3, k0, {{0, KChain::unit(k0)}, {1, KChain::of(UnitElem::from_dlog(k0, 1))}}};
  if (!validate_operation_spec(bad).ok() && validate_operation_spec(fine).ok()) return {};
  return fail(Json{{"spec", "p=3, i=3, y_2 = 1"}});
}

/// x = sum_{k<r} {t_{ik}, ..., t_{ik+i-1}} has gamma_r(x) != 0 and gamma_s(x) = 0
/// for s > r.
inline LawOutcome gamma_independence(const LawContext& c, Xoshiro256&) {
  const auto& T = c.tower;
  if (c.i == 0 || T->num_vars() < c.i) return skip();
  const std::size_t rmax = std::min<std::size_t>(3, T->num_vars() / c.i);
  for (std::size_t r = 1; r <= rmax; ++r) {
    Presentation x(T, c.i);
    for (std::size_t k = 0; k < r; ++k) {
      std::vector<UnitElem> e;
      for (std::size_t j = 0; j < c.i; ++j) e.push_back(UnitElem::linear(T, k * c.i + j, 0));
      x.push(1, Symbol(std::move(e)));
    }
    const auto gr = gamma(static_cast<std::int64_t>(r), x);
    if (is_zero(gr, c.nf)) return fail(Json{{"r", r}, {"presentation", format_presentation(x)}, {"gamma_r", "0"}});
    for (std::size_t s = r + 1; s <= r + 2; ++s)
      if (!is_zero(gamma(static_cast<std::int64_t>(s), x), c.nf))
        return fail(Json{{"r", r}, {"s", s}, {"presentation", format_presentation(x)}});
  }
  return {};
}

inline LawOutcome additivity(const LawContext& c, Xoshiro256& rng) {
  const auto k0 = c.tower->prefix(0);
  const auto a = KChain::of(UnitElem::from_dlog(k0, 1));
  struct Case {
    const char* name;
    OperationSpec spec;
    bool additive;
  };
  std::vector<Case> cases{{"y_1 = {g}", {c.i, k0, {{1, a}}}, true},
                          {"y_0 = 1", {c.i, k0, {{0, KChain::unit(k0)}}}, false},
                          {"y_2 = 1", {c.i, k0, {{2, KChain::unit(k0)}}}, false}};
  Json w = Json::array();
  bool ok = true;
  for (auto& cs : cases) {
    if (!validate_operation_spec(cs.spec).ok()) continue;
    const auto res = additivity_check(cs.spec, c.tower, rng, 5, c.nf);
    Json e{{"spec", cs.name}, {"additive", res.additive}, {"expected", cs.additive}};
    if (res.witness) e["witness"] = Json::array({format_presentation(res.witness->first), format_presentation(res.witness->second)});
    w.push_back(e);
    ok &= res.additive == cs.additive;
  }
  if (ok) return {};
  return fail(Json{{"specs", w}});
}

}  // namespace laws

// ---------------------------------------------------------------------------

struct SuiteConfig {
  std::string profile = "all";
  TowerPtr tower;
  std::size_t i = 2;
  std::size_t cases = 100;
  std::uint64_t seed = 0;
  std::size_t moves = 10;
  bool parallel = true;
};

struct LawReport {
  std::string name;
  std::size_t cases = 0, passes = 0, skipped = 0;
  bool expect_counterexample = false;
  std::string skip_reason;
  Json first_counterexample;  // null if none
  bool found() const { return !first_counterexample.is_null(); }
  /// Laws expected to fail only report whether a counterexample was found.
  bool ok() const { return !skip_reason.empty() || expect_counterexample || !found(); }
  std::string status() const {
    if (!skip_reason.empty()) return "skipped";
    if (expect_counterexample) return found() ? "expected-counterexample" : "no-counterexample";
    return found() ? "fail" : "pass";
  }
};

struct SuiteReport {
  SuiteConfig config;
  Regime regime = Regime::none;
  std::vector<LawReport> laws;
  bool ok() const {
    return std::all_of(laws.begin(), laws.end(), [](const auto& l) { return l.ok(); });
  }
};

inline const std::vector<std::string>& suite_profiles() {
  static const std::vector<std::string> names{"steinberg", "commutativity", "exactness",
                                              "uniformizer", "divided-power-laws", "invariance",
                                              "obstruction", "sw", "vanishing",
                                              "classification", "all"};
  return names;
}

inline std::string canonical_profile(const std::string& name) {
  if (name == "prop2.3") return "divided-power-laws";
  if (std::find(suite_profiles().begin(), suite_profiles().end(), name) == suite_profiles().end())
    throw DomainError("unknown suite profile '" + name + "'");
  return name;
}

/// The laws of a profile for this tower and degree. Inapplicable laws carry a
/// skip reason; with an explicit profile they are an error instead.
inline std::vector<Law> profile_laws(const std::string& profile_name, const TowerField& t, std::size_t i) {
  const auto profile = canonical_profile(profile_name);
  const auto& f = *t.base();
  const bool all = profile == "all";
  const auto reg = regime(i, t);
  const bool valid = reg != Regime::none;
  std::vector<Law> out;
  auto want = [&](const char* p) { return all || profile == p; };
  auto add = [&](std::string name, LawFn fn, std::string skip = {}, bool expect = false, bool fixture = false) {
    if (!skip.empty() && !all) throw DomainError("law '" + name + "' does not apply: " + skip);
    out.push_back(Law{std::move(name), std::move(fn), expect, fixture, std::move(skip)});
  };
  const std::string need_var = t.num_vars() == 0 ? "needs a variable" : "";
  if (want("steinberg"))
    add("steinberg", laws::steinberg, f.order() == 2 && t.num_vars() == 0 ? "F_2 has no Steinberg pair" : "");
  if (want("commutativity")) add("commutativity", laws::commutativity);
  if (want("exactness")) add("exactness", laws::exactness, need_var);
  if (want("uniformizer")) add("uniformizer-change", laws::uniformizer_change, need_var);
  if (want("divided-power-laws")) {
    const std::string no_regime = valid ? "" : "no divided powers in this regime";
    add("gamma-unit", laws::gamma_unit);
    add("gamma-scalar", laws::gamma_scalar, all ? no_regime : "");
    add("gamma-product", laws::gamma_product, all ? no_regime : "");
    add("gamma-sum", laws::gamma_sum);
    add("gamma-compose", laws::gamma_compose, all ? no_regime : "");
    add("gamma-symbol", laws::gamma_symbol);
    if (!valid && !all)
      for (auto& l : out)
        if (l.name == "gamma-scalar" || l.name == "gamma-product" || l.name == "gamma-compose")
          l.skip_reason = "no divided powers in this regime";
  }
  if (want("invariance") || profile == "obstruction") {
    add("invariance", laws::invariance, "", !valid);
    add("weak-invariance", laws::weak_invariance, i == 0 ? "needs i >= 1" : "");
  }
  if (want("obstruction")) {
    std::string why;
    if (t.modulus() != 2 || f.is_square(f.minus_one_code()) || t.num_vars() < 3 || i != 2)
      why = "needs mod 2, -1 not a square, three variables and i = 2";
    add("obstruction-fixture", laws::obstruction, why, true, true);
    add("obstruction-weak-gamma", laws::obstruction_weak, why, false, true);
  }
  if (want("sw"))
    add("sw-identities", laws::stiefel_whitney,
        t.modulus() != 2 || f.characteristic() == 2 ? "needs mod 2 and characteristic != 2" : "");
  if (want("vanishing")) add("vanishing", laws::vanishing, "", false, t.num_vars() == 0);
  if (want("classification")) {
    add("validate-rejects-non-kernel", laws::validate_rejects_non_kernel, "", false, true);
    add("validate-rejects-odd-degree", laws::validate_rejects_odd_degree, "", false, true);
    add("gamma-independence", laws::gamma_independence,
        valid && t.num_vars() >= i && i > 0 ? "" : "needs a valid regime and i variables", false, true);
    add("additivity", laws::additivity, i > 0 ? "" : "needs i >= 1", false, true);
  }
  return out;
}

inline std::uint64_t law_stream(const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : name) h = (h ^ ch) * 0x100000001b3ULL;
  return h;
}

inline LawReport run_law(const Law& law, const LawContext& ctx, const SuiteConfig& cfg) {
  LawReport rep;
  rep.name = law.name;
  rep.expect_counterexample = law.expect_counterexample;
  rep.skip_reason = law.skip_reason;
  if (!law.skip_reason.empty()) return rep;
  const std::size_t n = law.fixture ? 1 : cfg.cases;
  std::vector<LawOutcome> results(n);
  auto run_one = [&](std::size_t k) {
    auto rng = Xoshiro256::for_case(cfg.seed, law_stream(law.name), k);
    try {
      results[k] = law.run(ctx, rng);
    } catch (const std::exception& e) {
      results[k] = laws::fail(Json{{"error", e.what()}});
    }
  };
  const std::size_t workers = cfg.parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1;
  if (workers <= 1 || n < 2) {
    for (std::size_t k = 0; k < n; ++k) run_one(k);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w)
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t k = w; k < n; k += workers) run_one(k);
      }));
    for (auto& j : jobs) j.get();
  }
  rep.cases = n;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& r = results[k];
    if (r.skipped) ++rep.skipped;
    if (r.holds) {
      ++rep.passes;
    } else if (rep.first_counterexample.is_null()) {
      rep.first_counterexample = Json{{"case", k}};
      for (const auto& [key, v] : r.witness.items()) rep.first_counterexample[key] = v;
    }
  }
  return rep;
}

inline SuiteReport run_suite(const SuiteConfig& cfg) {
  if (!cfg.tower) throw DomainError("suite needs a field");
  SuiteReport rep;
  rep.config = cfg;
  rep.config.profile = canonical_profile(cfg.profile);
  rep.regime = regime(cfg.i, *cfg.tower);
  LawContext ctx;
  ctx.tower = cfg.tower;
  ctx.i = cfg.i;
  ctx.regime = rep.regime;
  ctx.moves = cfg.moves;
  for (const auto& law : profile_laws(cfg.profile, *cfg.tower, cfg.i)) rep.laws.push_back(run_law(law, ctx, cfg));
  return rep;
}

inline Json to_json(const SuiteReport& r) {
  Json laws = Json::array();
  for (const auto& l : r.laws) {
    Json j{{"law", l.name}, {"status", l.status()}, {"cases", l.cases}, {"passes", l.passes}, {"skipped", l.skipped}};
    if (!l.skip_reason.empty()) j["skip_reason"] = l.skip_reason;
    if (l.expect_counterexample) j["expected_counterexample_found"] = l.found() ? "yes" : "no";
    j["first_counterexample"] = l.first_counterexample;
    laws.push_back(std::move(j));
  }
  return Json{{"profile", r.config.profile},
              {"field", r.config.tower->describe()},
              {"header", tower_header(*r.config.tower)},
              {"i", r.config.i},
              {"regime", to_string(r.regime)},
              {"seed", r.config.seed},
              {"cases", r.config.cases},
              {"moves", r.config.moves},
              {"prng", "xoshiro256** seeded by splitmix64"},
              {"laws", laws},
              {"result", r.ok() ? "pass" : "fail"}};
}

inline std::string format_report(const SuiteReport& r) {
  std::string out = "profile " + r.config.profile + " on " + r.config.tower->describe() + ", i=" +
                    std::to_string(r.config.i) + ", regime " + to_string(r.regime) + ", seed " +
                    std::to_string(r.config.seed) + "\n";
  for (const auto& l : r.laws) {
    out += "  " + l.name + ": " + l.status();
    if (l.skip_reason.empty()) out += " (" + std::to_string(l.passes) + "/" + std::to_string(l.cases) + ")";
    else out += " (" + l.skip_reason + ")";
    if (l.expect_counterexample) out += std::string(", expected-counterexample found: ") + (l.found() ? "yes" : "no");
    out += "\n";
    if (l.found()) out += "    first counterexample: " + l.first_counterexample.dump() + "\n";
  }
  out += r.ok() ? "result: pass\n" : "result: fail\n";
  return out;
}

}  // namespace milnor

#include <gtest/gtest.h>

#include "milnor/dsl.hpp"
#include "milnor/operations.hpp"

namespace milnor {
namespace {

TowerPtr field(const char* text) { return parse_field(text); }
KChain chain(const char* text, const TowerPtr& t) { return parse_chain(text, t); }
Presentation pres(const char* text, const TowerPtr& t) { return parse_presentation(text, t); }

TEST(Gamma, Examples) {
  const auto T = field("GF(5)(a,b,c,d) mod 3");
  const auto x = pres("[{a,b}; {c,d}]", T);
  EXPECT_EQ(gamma(2, x), chain("{a,b,c,d}", T));
  EXPECT_TRUE(gamma(2, pres("[{a,b}]", T)).empty());
  EXPECT_TRUE(gamma(3, pres("[5{a,b}]", T)).empty());
  EXPECT_EQ(gamma(0, x), KChain::unit(T));
  EXPECT_EQ(gamma(0, Presentation(T, 2)), KChain::unit(T));
  EXPECT_EQ(gamma(1, x), x.chain());
  EXPECT_THROW(gamma(-1, x), DomainError);
}

TEST(Gamma, CoefficientsMultiply) {
  const auto T = field("GF(5)(a,b,c)");
  // gamma_2(2s_1 - 3s_2 + s_3) = -6 s_1s_2 + 2 s_1s_3 - 3 s_2s_3
  const auto g = gamma_presentation(2, pres("2{a} - 3{b} + {c}", T));
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].coeff, -6);
  EXPECT_EQ(g[1].coeff, 2);
  EXPECT_EQ(g[2].coeff, -3);
  EXPECT_EQ(g.chain(), chain("-6{a,b} + 2{a,c} - 3{b,c}", T));
}

TEST(Gamma, SizeIsBinomial) {
  const auto T = field("GF(7)(a,b,c,d,e,f,h)");
  Presentation p(T, 1);
  for (std::size_t k = 0; k < 7; ++k) p.push(1, Symbol({UnitElem::linear(T, k, 0)}));
  for (std::int64_t n = 0; n <= 8; ++n)
    EXPECT_EQ(gamma_presentation(n, p).size(), static_cast<std::size_t>(binomial(7, static_cast<unsigned>(n))));
}

TEST(Regime, Examples) {
  EXPECT_EQ(regime(2, *field("GF(5)(t,u) mod 3")), Regime::odd_p_even_i);
  EXPECT_EQ(regime(2, *field("GF(7)(t,u) mod 2")), Regime::none);
  EXPECT_EQ(regime(3, *field("GF(7)(t) mod 3")), Regime::none);
  EXPECT_EQ(regime(3, *field("GF(5)(t) mod 2")), Regime::sqrt_minus_one);
  EXPECT_EQ(regime(2, *field("GF(4)(t)")), Regime::char2_even_i);
  EXPECT_EQ(regime(3, *field("GF(4)(t)")), Regime::none);
  EXPECT_EQ(regime(2, *field("GF(4)(t) mod 2")), Regime::sqrt_minus_one);
  EXPECT_EQ(regime(2, *field("GF(5)(t)")), Regime::none);
  EXPECT_EQ(regime(1, *field("GF(5)(t) mod 3")), Regime::none);
  EXPECT_EQ(regime(1, *field("GF(5)(t) mod 3"), 1), Regime::always);
  EXPECT_EQ(regime(2, *field("GF(7)(t) mod 2"), 0), Regime::always);
  EXPECT_EQ(to_string(Regime::odd_p_even_i), "odd-p-even-i");
}

TEST(Regime, NoGammaTwoOnDegreeOne) {
  // gamma_2 is not well defined on K_1 even when -1 is a square.
  const auto T = field("GF(5)(t,u) mod 2");
  EXPECT_FALSE(equal(gamma(2, pres("[{t}; {u}]", T)), gamma(2, pres("[{t*u}]", T))));
}

TEST(Tau, Examples) {
  const auto F7 = field("GF(7) mod 2");
  EXPECT_TRUE(in_ker_tau(2, chain("{-1}", F7)));
  EXPECT_FALSE(in_ker_tau(2, chain("{}", F7)));
  const auto F5 = field("GF(5)(t) mod 2");
  Xoshiro256 rng(5);
  for (std::size_t i = 2; i <= 4; ++i)
    for (int k = 0; k < 10; ++k) EXPECT_TRUE(is_zero(tau(i, random_chain(F5, rng.below(2), 2, rng))));
  const auto Z5 = field("GF(5)");
  EXPECT_EQ(chain("{-1}", Z5), chain("{g^2}", Z5));
  EXPECT_TRUE(is_two_torsion(chain("{-1}", Z5)));
  EXPECT_FALSE(is_zero(chain("{-1}", Z5)));
  EXPECT_FALSE(is_two_torsion(chain("{g}", Z5)));
  EXPECT_EQ(tau(1, chain("{g}", Z5)), chain("{g}", Z5));
  EXPECT_THROW(tau(0, chain("{g}", Z5)), DomainError);
}

TEST(WeakGamma, RemovesTheModTwoObstruction) {
  const auto T = field("GF(7)(t,u,v) mod 2");
  const auto p1 = pres("[{t,u}; {t,v}]", T);
  const auto p2 = pres("[{t,u*v}]", T);
  ASSERT_TRUE(equal(p1.chain(), p2.chain()));
  const auto y = chain("{-1}", T->prefix(0));
  EXPECT_TRUE(equal(weak_gamma(y, 2, p1), weak_gamma(y, 2, p2)));

  const auto naive = gamma(2, p1) - gamma(2, p2);
  EXPECT_FALSE(is_zero(naive));
  EXPECT_TRUE(equal(naive, chain("{-1,t,u,v}", T)));

  EXPECT_THROW(weak_gamma(chain("{}", T->prefix(0)), 2, p1), SideConditionError);
  EXPECT_THROW(weak_gamma(y, 1, p1), DomainError);
}

TEST(WeakGamma, SquareRootOfMinusOne) {
  const auto T = field("GF(5)(t,u,v) mod 2");
  const auto p1 = pres("[{t,u}; {t,v}]", T);
  const auto p2 = pres("[{t,u*v}]", T);
  EXPECT_TRUE(equal(gamma(2, p1), gamma(2, p2)));
  EXPECT_TRUE(equal(weak_gamma(chain("{}", T->prefix(0)), 2, p1), gamma(2, p2)));
}

TEST(WeakGamma, IntegralSideConditions) {
  const auto Z5 = field("GF(5)");
  const auto m1 = chain("{-1}", Z5);
  EXPECT_FALSE(weak_gamma_violation(3, m1));
  EXPECT_FALSE(weak_gamma_violation(2, m1));
  const auto g = chain("{g}", Z5);
  EXPECT_FALSE(weak_gamma_violation(2, g));
  ASSERT_TRUE(weak_gamma_violation(3, g));
  EXPECT_NE(weak_gamma_violation(3, g)->find("2-torsion"), std::string::npos);
  const auto one = chain("{}", Z5);
  ASSERT_TRUE(weak_gamma_violation(2, one));
  EXPECT_NE(weak_gamma_violation(2, one)->find("ker τ_2"), std::string::npos);
  EXPECT_FALSE(weak_gamma_violation(2, chain("{}", field("GF(4)"))));
}

TEST(Operation, Evaluate) {
  const auto T = field("GF(5)(a,b,c,d) mod 3");
  const auto k0 = T->prefix(0);
  const auto x = pres("[{a,b}; {c,d}]", T);

  OperationSpec constant{2, k0, {{0, chain("{g}", k0)}}};
  const auto c = evaluate_operation(constant, x);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(equal(c.at(1), chain("{g}", T)));

  OperationSpec linear{2, k0, {{1, chain("{g}", k0)}}};
  EXPECT_TRUE(equal(evaluate_operation(linear, x).at(3), chain("{g,a,b} + {g,c,d}", T)));

  OperationSpec square{2, k0, {{2, chain("{}", k0)}}};
  EXPECT_EQ(evaluate_operation(square, x).at(4), chain("{a,b,c,d}", T));

  EXPECT_THROW(evaluate_operation(square, pres("[{a}]", T)), DomainError);
  OperationSpec invalid{3, k0, {{2, chain("{}", k0)}}};
  EXPECT_THROW(evaluate_operation(invalid, pres("[{a,b,c}]", T)), SideConditionError);
}

TEST(Operation, Validate) {
  const auto F7 = field("GF(7) mod 2");
  EXPECT_TRUE(validate_operation_spec({2, F7, {{2, chain("{-1}", F7)}}}).ok());
  const auto bad = validate_operation_spec({2, F7, {{2, chain("{}", F7)}}});
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(bad.violations.front(), "y_2 ∉ ker τ_2");
  const auto F7m3 = field("GF(7) mod 3");
  EXPECT_FALSE(validate_operation_spec({3, F7m3, {{2, chain("{}", F7m3)}}}).ok());
  EXPECT_TRUE(validate_operation_spec({3, F7m3, {{0, chain("{}", F7m3)}, {1, chain("{}", F7m3)}}}).ok());
  EXPECT_TRUE(validate_operation_spec({3, F7m3, {{2, chain("3{}", F7m3)}}}).ok());
  const auto other = field("GF(5) mod 2");
  EXPECT_FALSE(validate_operation_spec({2, F7, {{1, chain("{}", other)}}}).ok());
}

TEST(StiefelWhitney, Examples) {
  const auto T = field("GF(5)(t,u,v,w) mod 2");
  const DiagonalForm q{T, {parse_unit("t", T), parse_unit("u", T)}};
  const auto w = sw_total(q);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0], KChain::unit(T));
  EXPECT_TRUE(equal(w[1], chain("{t*u}", T)));
  EXPECT_TRUE(equal(w[2], chain("{t,u}", T)));
  EXPECT_TRUE(sw_class(q, 3).empty());

  const DiagonalForm ones{T, {UnitElem::one(T), UnitElem::one(T), UnitElem::one(T)}};
  const auto wo = sw_total(ones);
  for (std::size_t k = 1; k < wo.size(); ++k) EXPECT_TRUE(is_zero(wo[k]));

  const DiagonalForm tuv{T, {parse_unit("t", T), parse_unit("u", T), parse_unit("v", T)}};
  EXPECT_EQ(sw_class(tuv, 3), chain("{t,u,v}", T));
  EXPECT_TRUE(equal(sw_class(tuv, 1) * sw_class(tuv, 2), sw_class(tuv, 3)));
  EXPECT_TRUE(sw_identities_check(tuv).all_hold());

  const DiagonalForm four{T, {parse_unit("t", T), parse_unit("u", T), parse_unit("v", T), parse_unit("w", T)}};
  const auto rep = sw_identities_check(four);
  EXPECT_TRUE(rep.all_hold());
  bool checked_gamma = false;
  for (const auto& id : rep.identities) checked_gamma |= id.name == "w4 = gamma_2(w2)";
  EXPECT_TRUE(checked_gamma);
  EXPECT_TRUE(equal(gamma(2, gamma_presentation(2, sw_presentation(four))), sw_class(four, 4)));

  EXPECT_TRUE(sw_identities_check({T, {parse_unit("t", T)}}).all_hold());
}

TEST(StiefelWhitney, Domain) {
  EXPECT_THROW(sw_total({field("GF(4)(t) mod 2"), {}}), DomainError);
  EXPECT_THROW(sw_total({field("GF(5)(t)"), {}}), DomainError);
  const auto T = field("GF(7)(t,u) mod 2");
  const auto rep = sw_identities_check({T, {parse_unit("t", T), parse_unit("u", T), parse_unit("-t", T)}});
  EXPECT_TRUE(rep.all_hold());
  for (const auto& id : rep.identities) EXPECT_EQ(id.name.find("gamma"), std::string::npos);
}

TEST(Moves, Examples) {
  const auto T = field("GF(5)(t,u,v) mod 3");
  EXPECT_TRUE(equal(pres("[{t,u*v}]", T).chain(), pres("[{t,u}; {t,v}]", T).chain()));
  EXPECT_TRUE(equal(pres("[{t,u}]", T).chain(), pres("[-{u,t}]", T).chain()));
  EXPECT_TRUE(equal(pres("[{t,u}]", T).chain(), pres("[{t*t^3,u}]", T).chain()));
}

TEST(Moves, PreserveTheClass) {
  for (const char* spec : {"GF(5)(t,u,v) mod 3", "GF(7)(t,u) mod 2", "GF(2)(t,u)", "GF(4)(t,u) mod 2"}) {
    const auto T = field(spec);
    Xoshiro256 rng(7);
    for (int k = 0; k < 30; ++k) {
      const auto x = random_presentation(T, 2, 2, rng);
      const auto m = presentation_moves(x, rng, 10, UnitShape{}, true);
      ASSERT_EQ(m.trace.size(), 10u);
      ASSERT_TRUE(equal(x.chain(), m.pres.chain())) << spec;
    }
  }
}

TEST(Moves, DeterministicGivenSeed) {
  const auto T = field("GF(5)(t,u) mod 3");
  const auto x = pres("[{t,u}; 2{t-1,u}]", T);
  const auto a = presentation_moves(x, std::uint64_t{9}, 12);
  const auto b = presentation_moves(x, std::uint64_t{9}, 12);
  EXPECT_EQ(format_presentation(a.pres), format_presentation(b.pres));
  EXPECT_EQ(a.trace, b.trace);
}

TEST(Length, UpperBound) {
  const auto T = field("GF(5)(t,u)");
  EXPECT_EQ(length_upper_bound(pres("[{t}; {u}; {t*u}]", T)), 3u);
  EXPECT_EQ(length_upper_bound(Presentation(T, 1)), 0u);
}

TEST(Vanishing, FiniteFields) {
  for (const char* spec : {"GF(5) mod 2", "GF(7) mod 3", "GF(9)", "GF(8) mod 7", "GF(2)"})
    EXPECT_TRUE(vanishing_check_exhaustive(field(spec), 2)) << spec;
  EXPECT_THROW(vanishing_check_exhaustive(field("GF(5)"), 1), DomainError);
  EXPECT_THROW(vanishing_check_exhaustive(field("GF(5)(t)"), 2), DomainError);
  Xoshiro256 rng(8);
  EXPECT_TRUE(vanishing_check(field("GF(7)(t) mod 3"), 3, rng, 30));
  EXPECT_THROW(vanishing_check(field("GF(7)(t) mod 3"), 2, rng), DomainError);
}

TEST(Additivity, Examples) {
  const auto T = field("GF(5)(a,b,c,d) mod 3");
  const auto k0 = T->prefix(0);
  Xoshiro256 rng(10);
  EXPECT_TRUE(additivity_check({2, k0, {{1, chain("{g}", k0)}}}, T, rng).additive);
  EXPECT_FALSE(additivity_check({2, k0, {{0, chain("{}", k0)}}}, T, rng).additive);
  const auto sq = additivity_check({2, k0, {{2, chain("{}", k0)}}}, T, rng);
  ASSERT_FALSE(sq.additive);
  ASSERT_TRUE(sq.witness);
  EXPECT_EQ(format_presentation(sq.witness->first), "[{a, b}]");
  EXPECT_EQ(format_presentation(sq.witness->second), "[{c, d}]");
}

}  // namespace
}  // namespace milnor

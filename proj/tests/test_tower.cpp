#include <gtest/gtest.h>

#include "milnor/random.hpp"
#include "milnor/tower.hpp"
#include "oracle.hpp"

namespace milnor {
namespace {

TowerPtr f5tu(std::uint32_t mod = 2) { return make_tower(make_field(5), {"t", "u"}, mod); }

TEST(TowerField, Construction) {
  const auto t = f5tu();
  EXPECT_EQ(t->num_vars(), 2u);
  EXPECT_EQ(t->modulus(), 2u);
  EXPECT_EQ(t->drop_top()->vars(), std::vector<std::string>{"t"});
  EXPECT_EQ(t->drop_top()->base(), t->base());
  EXPECT_EQ(t->describe(), "GF(5)(t,u) mod 2");

  const auto f7 = make_tower(make_field(7), {});
  EXPECT_EQ(f7->num_vars(), 0u);
  EXPECT_TRUE(f7->integral());
  EXPECT_THROW(f7->drop_top(), DomainError);

  const auto f4 = make_tower(make_field(2, 2), {"t"}, 2);
  EXPECT_EQ(f4->base()->characteristic(), 2u);
  EXPECT_EQ(f4->describe(), "GF(2^2)(t) mod 2");
}

TEST(TowerField, Errors) {
  EXPECT_THROW(make_tower(make_field(5), {"t", "t"}), DomainError);
  EXPECT_THROW(make_tower(make_field(5), {"g"}), DomainError);
  EXPECT_THROW(make_tower(make_field(5), {"2x"}), DomainError);
  EXPECT_THROW(make_tower(make_field(5), {"t"}, 4), DomainError);
}

TEST(TowerField, CachedByValue) {
  EXPECT_EQ(f5tu(), f5tu());
  EXPECT_NE(f5tu(2), f5tu(3));
  EXPECT_EQ(f5tu()->prefix(1), make_tower(make_field(5), {"t"}, 2));
}

TEST(UnitElem, Constructors) {
  const auto T = make_tower(make_field(5), {"t"});
  const auto t1 = UnitElem::linear(T, 0, 1);
  const auto sq = t1 * t1;
  EXPECT_EQ(sq.exponent(0, 1), 2);
  EXPECT_EQ(sq.factors().size(), 1u);

  const auto inv = UnitElem::linear(T, 0, 2).inverse();
  EXPECT_EQ(inv.exponent(0, 2), -1);

  const auto four_t = UnitElem::constant_code(T, 4) * UnitElem::linear(T, 0, 0);
  EXPECT_EQ(four_t.const_dlog(), 2);
  EXPECT_EQ(four_t.exponent(0, 0), 1);

  EXPECT_THROW(UnitElem::constant_code(T, 0), DomainError);
  EXPECT_THROW(UnitElem::linear(T, "u", T->base()->one()), DomainError);
  EXPECT_TRUE((t1 / t1).is_one());
}

TEST(UnitElem, GroupLaws) {
  const auto T = make_tower(make_field(7), {"t", "u"});
  Xoshiro256 rng(1);
  for (int k = 0; k < 200; ++k) {
    const auto a = random_unit(T, rng), b = random_unit(T, rng), c = random_unit(T, rng);
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_EQ(a * b, b * a);
    ASSERT_TRUE((a * a.inverse()).is_one());
    ASSERT_EQ(a.pow(3), a * a * a);
    ASSERT_EQ(a.pow(-2), (a * a).inverse());
  }
}

TEST(UnitElem, Valuation) {
  const auto T = make_tower(make_field(5), {"t"});
  const auto u = UnitElem::linear(T, 0, 1).pow(2) / UnitElem::linear(T, 0, 2);
  EXPECT_EQ(valuation(u, Place::finite(1)), 2);
  EXPECT_EQ(valuation(u, Place::finite(2)), -1);
  EXPECT_EQ(valuation(u, Place::infinity()), -1);
  EXPECT_EQ(valuation(UnitElem::constant_code(T, 3), Place::finite(0)), 0);
  EXPECT_THROW(valuation(UnitElem::one(T->drop_top()), Place::infinity()), DomainError);
}

TEST(UnitElem, ValuationIsAHomomorphismAndDegreeFormulaHolds) {
  const auto T = make_tower(make_field(5), {"s", "t"});
  Xoshiro256 rng(2);
  UnitShape shape;
  shape.root_pool = 5;
  shape.max_factors = 4;
  for (int k = 0; k < 300; ++k) {
    const auto a = random_unit(T, rng, shape), b = random_unit(T, rng, shape);
    Int total = valuation(a, Place::infinity());
    for (std::uint32_t r = 0; r < 5; ++r) {
      ASSERT_EQ(valuation(a * b, Place::finite(r)), valuation(a, Place::finite(r)) + valuation(b, Place::finite(r)));
      total += valuation(a, Place::finite(r));
    }
    ASSERT_EQ(total, 0);
  }
}

TEST(UnitElem, ResidueUnit) {
  const auto T = make_tower(make_field(5), {"t"});
  EXPECT_EQ(residue_unit(UnitElem::linear(T, 0, 2), Place::finite(0)).const_dlog(), 3);
  EXPECT_TRUE(residue_unit(UnitElem::linear(T, 0, 3), Place::finite(3)).is_one());

  const auto TU = make_tower(make_field(5), {"t", "u"});
  const auto inner = UnitElem::constant_code(TU, 3) * UnitElem::linear(TU, 0, 4);
  const auto x = UnitElem::linear(TU, 1, 1) * inner;
  EXPECT_EQ(residue_unit(x, Place::infinity()), inner.retyped(TU->drop_top()));
  EXPECT_EQ(residue_unit(x, Place::infinity()).tower(), TU->drop_top());
}

TEST(UnitElem, ResidueUnitIsMultiplicative) {
  const auto T = make_tower(make_field(7), {"t", "u"});
  Xoshiro256 rng(3);
  for (int k = 0; k < 200; ++k) {
    const auto a = random_unit(T, rng), b = random_unit(T, rng);
    for (const auto P : {Place::finite(0), Place::finite(1), Place::finite(3), Place::infinity()})
      ASSERT_EQ(residue_unit(a * b, P), residue_unit(a, P) * residue_unit(b, P));
  }
}

// Evaluates a one-variable element of G at x in F_p (x not a root).
std::uint64_t evaluate(const UnitElem& u, std::uint64_t x, std::uint64_t p) {
  std::uint64_t v = oracle::powmod(u.tower()->base()->generator_code(), std::uint64_t(u.const_dlog()), p);
  for (const auto& f : u.factors()) {
    const std::uint64_t lin = (x + p - f.root) % p;
    const auto e = static_cast<long>(f.exp);
    const std::uint64_t base = e >= 0 ? lin : oracle::powmod(lin, p - 2, p);
    v = v * oracle::powmod(base, static_cast<std::uint64_t>(std::labs(e)), p) % p;
  }
  return v;
}

TEST(UnitElem, OneMinus) {
  const auto T = make_tower(make_field(5), {"t"});
  const auto t = UnitElem::linear(T, 0, 0);
  const auto m = one_minus(t);
  ASSERT_TRUE(m);
  EXPECT_EQ(*m, UnitElem::minus_one(T) * UnitElem::linear(T, 0, 1));
  EXPECT_EQ(one_minus(UnitElem::constant_code(T, 3))->constant_code(), 3u);
  EXPECT_FALSE(one_minus(UnitElem::linear(T, 0, 1) * UnitElem::linear(T, 0, 2)));
  EXPECT_THROW(one_minus(UnitElem::one(T)), DomainError);
}

TEST(UnitElem, OneMinusAgreesWithEvaluation) {
  constexpr std::uint64_t p = 11;
  const auto T = make_tower(make_field(p), {"t"});
  Xoshiro256 rng(4);
  UnitShape shape;
  shape.root_pool = 11;
  int defined = 0;
  for (int k = 0; k < 400; ++k) {
    const auto u = random_unit(T, rng, shape);
    if (u.is_one()) continue;
    const auto w = one_minus(u);
    if (!w) continue;
    ++defined;
    int checked = 0;
    for (std::uint64_t x = 0; x < p && checked < 3; ++x) {
      bool pole = false;
      for (const auto& f : u.factors()) pole |= f.root == x;
      for (const auto& f : w->factors()) pole |= f.root == x;
      if (pole) continue;
      ASSERT_EQ((evaluate(u, x, p) + evaluate(*w, x, p)) % p, 1u);
      ++checked;
    }
  }
  EXPECT_GT(defined, 20);
}

}  // namespace
}  // namespace milnor

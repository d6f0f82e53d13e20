#include <gtest/gtest.h>

#include "milnor/suite.hpp"

namespace milnor {
namespace {

SuiteReport run(const char* profile, const char* field, std::size_t i, std::size_t cases, std::uint64_t seed = 1) {
  SuiteConfig cfg;
  cfg.profile = profile;
  cfg.tower = parse_field(field);
  cfg.i = i;
  cfg.cases = cases;
  cfg.seed = seed;
  return run_suite(cfg);
}

TEST(Suite, DividedPowerLawsInValidRegime) {
  const auto r = run("prop2.3", "GF(5)(t,u,v,w) mod 2", 2, 30);
  EXPECT_EQ(r.config.profile, "divided-power-laws");
  EXPECT_EQ(r.regime, Regime::sqrt_minus_one);
  EXPECT_TRUE(r.ok()) << format_report(r);
  EXPECT_EQ(r.laws.size(), 6u);
}

TEST(Suite, ReportIsDeterministic) {
  const auto a = to_json(run("invariance", "GF(7)(t,u,v) mod 2", 2, 20, 42)).dump();
  SuiteConfig cfg;
  cfg.profile = "invariance";
  cfg.tower = parse_field("GF(7)(t,u,v) mod 2");
  cfg.cases = 20;
  cfg.seed = 42;
  cfg.parallel = false;
  const auto b = to_json(run_suite(cfg)).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, to_json(run("invariance", "GF(7)(t,u,v) mod 2", 2, 20, 43)).dump());
}

TEST(Suite, NaiveGammaFailsOverF7Mod2) {
  const auto r = run("obstruction", "GF(7)(t,u,v) mod 2", 2, 40);
  EXPECT_EQ(r.regime, Regime::none);
  EXPECT_TRUE(r.ok()) << format_report(r);
  bool fixture = false;
  for (const auto& l : r.laws) {
    if (l.name == "obstruction-fixture") {
      fixture = true;
      EXPECT_TRUE(l.found());
      EXPECT_EQ(l.status(), "expected-counterexample");
      EXPECT_TRUE(l.first_counterexample["difference_equals_witness"].get<bool>());
    }
    if (l.name == "invariance") {
      EXPECT_TRUE(l.expect_counterexample);
      EXPECT_TRUE(l.found());
    }
  }
  EXPECT_TRUE(fixture);
  const auto text = format_report(r);
  EXPECT_NE(text.find("expected-counterexample found: yes"), std::string::npos);
}

TEST(Suite, FiniteFieldVanishing) {
  for (const char* f : {"GF(7) mod 2", "GF(9) mod 3", "GF(4) integral", "GF(5) mod 5"}) {
    const auto r = run("vanishing", f, 2, 10);
    EXPECT_TRUE(r.ok()) << format_report(r);
  }
}

TEST(Suite, RelationProfiles) {
  for (const char* p : {"steinberg", "commutativity", "exactness", "uniformizer"}) {
    const auto r = run(p, "GF(7)(t,u) mod 3", 2, 30);
    EXPECT_TRUE(r.ok()) << format_report(r);
  }
}

TEST(Suite, StiefelWhitney) {
  EXPECT_TRUE(run("sw", "GF(5)(t,u) mod 2", 1, 20).ok());
  EXPECT_TRUE(run("sw", "GF(7)(t,u) mod 2", 1, 20).ok());
  EXPECT_THROW(run("sw", "GF(7)(t,u) mod 3", 1, 1), DomainError);
  EXPECT_THROW(run("sw", "GF(4)(t) mod 2", 1, 1), DomainError);
}

TEST(Suite, Classification) {
  const auto r = run("classification", "GF(5)(a,b,c,d,e,f) mod 3", 2, 5);
  EXPECT_TRUE(r.ok()) << format_report(r);
}

TEST(Suite, UnknownProfile) { EXPECT_THROW(run("nope", "GF(5)", 2, 1), DomainError); }

TEST(Suite, AllSkipsWhatDoesNotApply) {
  const auto r = run("all", "GF(7) mod 3", 3, 5);
  EXPECT_TRUE(r.ok()) << format_report(r);
  bool skipped = false;
  for (const auto& l : r.laws) skipped |= l.status() == "skipped";
  EXPECT_TRUE(skipped);
}

}  // namespace
}  // namespace milnor

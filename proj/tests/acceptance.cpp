// Acceptance runner: one PASS/FAIL line per criterion, each against its time
// limit. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "milnor/suite.hpp"

using namespace milnor;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Tally {
  std::size_t cases = 0, failures = 0;
  std::vector<std::string> notes;

  void add(const SuiteReport& r, const std::vector<std::string>& laws = {}) {
    for (const auto& l : r.laws) {
      if (!laws.empty() && std::find(laws.begin(), laws.end(), l.name) == laws.end()) continue;
      if (!l.skip_reason.empty()) {
        ++failures;
        notes.push_back(r.config.tower->describe() + " " + l.name + " skipped: " + l.skip_reason);
        continue;
      }
      cases += l.cases - l.skipped;
      if (!l.ok() || (l.skipped == l.cases)) {
        ++failures;
        notes.push_back(r.config.tower->describe() + " " + l.name + ": " + l.first_counterexample.dump());
      }
    }
  }
  void require(bool ok, const std::string& what) {
    if (!ok) {
      ++failures;
      notes.push_back(what);
    }
  }
};

SuiteReport run(const std::string& profile, const std::string& field, std::size_t i, std::size_t cases,
                std::size_t moves = 10) {
  SuiteConfig cfg;
  cfg.profile = profile;
  cfg.tower = parse_field(field);
  cfg.i = i;
  cfg.cases = cases;
  cfg.seed = kSeed;
  cfg.moves = moves;
  return run_suite(cfg);
}

const std::vector<std::string> kRelationFields{"GF(5)(t,u,v)",       "GF(5)(t,u,v) mod 2", "GF(5)(t,u,v) mod 3",
                                               "GF(7)(t,u,v)",       "GF(7)(t,u,v) mod 2", "GF(7)(t,u,v) mod 3"};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Tally()> check;
};

Tally relation(const char* profile, std::size_t cases) {
  Tally t;
  for (const auto& f : kRelationFields) t.add(run(profile, f, 2, cases));
  return t;
}

Tally divided_power_laws() {
  Tally t;
  for (const char* f : {"GF(5)(a,b) mod 3", "GF(5)(a,b,c,d) mod 3", "GF(5)(a,b,c,d,e,h) mod 3", "GF(7)(a,b,c) mod 3",
                        "GF(7)(a,b,c,d,e,h) mod 3", "GF(5)(a,b,c,d) mod 2", "GF(5)(a,b,c,d,e,h) mod 2",
                        "GF(2)(a,b,c,d)", "GF(4)(a,b,c)", "GF(4)(a,b,c,d,e)"})
    t.add(run("divided-power-laws", f, 2, 200));
  return t;
}

Tally invariance() {
  Tally t;
  for (const char* f : {"GF(5)(a,b,c,d) mod 3", "GF(7)(a,b,c) mod 3", "GF(5)(a,b,c,d) mod 2", "GF(13)(a,b,c) mod 2",
                        "GF(2)(a,b,c)", "GF(4)(a,b,c,d)"}) {
    const auto r = run("invariance", f, 2, 200, 12);
    t.require(r.regime != Regime::none, std::string(f) + " is not a valid regime");
    t.add(r, {"invariance", "weak-invariance"});
    for (const auto& l : r.laws)
      t.require(!l.expect_counterexample, std::string(f) + " " + l.name + " was run as an expected counterexample");
  }
  return t;
}

Tally obstruction() {
  Tally t;
  const auto r = run("obstruction", "GF(7)(t,u,v) mod 2", 2, 1);
  for (const auto& l : r.laws) {
    if (l.name == "obstruction-fixture") {
      ++t.cases;
      t.require(l.found(), "fixture produced no difference");
      t.require(l.found() && l.first_counterexample["difference_equals_witness"].get<bool>(),
                "difference is not {-1,t,u,v}");
    }
    if (l.name == "obstruction-weak-gamma") {
      ++t.cases;
      t.require(l.status() == "pass", "weak gamma with y = {-1} still differs: " + l.first_counterexample.dump());
    }
  }
  const auto T = r.config.tower;
  const auto f = laws::obstruction_fixture(T);
  t.require(!is_zero(f.witness), "{-1,t,u,v} is zero");
  t.require(equal(gamma(2, f.p1) - gamma(2, f.p2), f.witness), "difference differs from {-1,t,u,v}");
  return t;
}

Tally stiefel_whitney() {
  Tally t;
  for (const char* f : {"GF(5)(t,u) mod 2", "GF(5)(t,u,v) mod 2", "GF(7)(t,u) mod 2", "GF(7)(t,u,v) mod 2"})
    t.add(run("sw", f, 1, 100));
  return t;
}

Tally vanishing() {
  Tally t;
  for (std::uint32_t q = 2; q <= 49; ++q) {
    const auto primes = detail::prime_factors(q);
    if (primes.size() != 1) continue;
    std::vector<std::uint32_t> moduli{2, 3};
    if (primes.front() > 3) moduli.push_back(static_cast<std::uint32_t>(primes.front()));
    for (auto p : moduli) t.add(run("vanishing", "GF(" + std::to_string(q) + ") mod " + std::to_string(p), 2, 1));
  }
  for (const char* f : {"GF(5)(t) mod 2", "GF(7)(t) mod 3", "GF(9)(t) mod 2", "GF(4)(t) mod 3"})
    t.add(run("vanishing", f, 2, 100));
  return t;
}

Tally classification() {
  Tally t;
  const auto r = run("classification", "GF(5)(t1,t2,t3,t4,t5,t6) mod 3", 2, 1);
  t.add(r);
  t.require(r.laws.size() == 4, "classification profile is incomplete");
  return t;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Steinberg relation vanishes at normal-form level", 10, [] { return relation("steinberg", 200); }},
      {2, "graded commutativity and {x,x} = {x,-1}", 10, [] { return relation("commutativity", 500); }},
      {3, "exactness of the residue sequence and d_0({t}a) = a", 10, [] { return relation("exactness", 200); }},
      {4, "divided power laws (1)-(6) in every valid regime", 60, divided_power_laws},
      {5, "gamma_2, gamma_3 invariant under presentation moves", 60, invariance},
      {6, "mod-2 obstruction fixture and its weak repair", 1, obstruction},
      {7, "uniformizer change formula, corrected form", 10, [] { return relation("uniformizer", 200); }},
      {8, "Stiefel-Whitney identities", 30, stiefel_whitney},
      {9, "vanishing over finite fields and of K_3(F_q(t))/p", 10, vanishing},
      {10, "operation classification corollaries", 30, classification},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Tally t;
    try {
      t = c.check();
    } catch (const std::exception& e) {
      t.failures = 1;
      t.notes.push_back(std::string("error: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = t.failures == 0 && secs < c.limit_s;
    failed += !ok;
    char line[256];
    std::snprintf(line, sizeof line, "%s  %2d  %-55s %6zu checks  %zu failures  %7.3f s (limit %g s)",
                  ok ? "PASS" : "FAIL", c.id, c.name.c_str(), t.cases, t.failures, secs, c.limit_s);
    std::cout << line << "\n";
    for (const auto& n : t.notes) std::cout << "        " << n.substr(0, 400) << "\n";
  }
  std::cout << (failed ? "acceptance: FAIL\n" : "acceptance: PASS\n");
  return failed ? 1 : 0;
}

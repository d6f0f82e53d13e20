#pragma once

// Divided powers and the operations built from them: regime detection, the
// maps tau_i, weak divided powers y * gamma_n, operations sum_r y_r gamma_r,
// Stiefel-Whitney classes of diagonal forms, and class-preserving rewrites of
// presentations.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "milnor/normal_form.hpp"
#include "milnor/presentation.hpp"
#include "milnor/random.hpp"

namespace milnor {

/// gamma_n(c_1 s_1 + ... + c_l s_l) = sum over l_1 < ... < l_n of
/// c_{l_1} s_{l_1} ... c_{l_n} s_{l_n}, kept as a presentation whose terms are
/// ordered lexicographically by index set.
inline Presentation gamma_presentation(std::int64_t n, const Presentation& pres) {
  if (n < 0) throw DomainError("divided power index must be non-negative");
  const auto un = static_cast<std::size_t>(n);
  Presentation out(pres.tower(), un * pres.degree());
  if (un == 0) {
    out.push(1, Symbol{});
    return out;
  }
  const std::size_t l = pres.size();
  if (un > l) return out;
  std::vector<std::size_t> idx(un);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    Int c = 1;
    std::vector<UnitElem> entries;
    entries.reserve(un * pres.degree());
    for (auto k : idx) {
      c *= pres[k].coeff;
      const auto& e = pres[k].symbol.entries();
      entries.insert(entries.end(), e.begin(), e.end());
    }
    out.push(c, Symbol(std::move(entries)));
    // next combination
    std::size_t pos = un;
    while (pos > 0 && idx[pos - 1] == l - un + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t k = pos; k < un; ++k) idx[k] = idx[k - 1] + 1;
  }
  return out;
}

inline KChain gamma(std::int64_t n, const Presentation& pres) { return gamma_presentation(n, pres).chain(); }

/// Why gamma_n, n >= 2, is (or is not) independent of the presentation on K_i.
enum class Regime {
  always,          // n <= 1
  odd_p_even_i,    // mod p, p odd, i even
  sqrt_minus_one,  // mod 2, -1 a square in the base
  char2_even_i,    // integral, characteristic 2, i even
  none,
};

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::always: return "always";
    case Regime::odd_p_even_i: return "odd-p-even-i";
    case Regime::sqrt_minus_one: return "sqrt-minus-one";
    case Regime::char2_even_i: return "char-2-even-i";
    case Regime::none: return "none";
  }
  return "none";
}

/// Regime for gamma_n with n >= 2 on K_i of the tower, in the tower's
/// coefficient mode. On K_0 and K_1 no gamma_n with n >= 2 is well defined.
inline Regime regime(std::size_t i, const TowerField& t) {
  if (i <= 1) return Regime::none;
  const auto& f = *t.base();
  const bool even = i % 2 == 0;
  if (!t.integral() && t.modulus() != 2 && even) return Regime::odd_p_even_i;
  if (t.modulus() == 2 && f.is_square(f.minus_one_code())) return Regime::sqrt_minus_one;
  if (t.integral() && f.characteristic() == 2 && even) return Regime::char2_even_i;
  return Regime::none;
}

inline Regime regime(std::size_t i, const TowerField& t, std::int64_t n) {
  return n <= 1 ? Regime::always : regime(i, t);
}

/// tau_i(y) = {-1}^{i-1} . y
inline KChain tau(std::size_t i, const KChain& y) {
  if (i == 0) throw DomainError("tau_i needs i >= 1");
  const auto m1 = KChain::of(UnitElem::minus_one(y.tower()));
  KChain r = KChain::unit(y.tower());
  for (std::size_t k = 1; k < i; ++k) r = r * m1;
  return r * y;
}

inline bool in_ker_tau(std::size_t i, const KChain& y) { return is_zero(tau(i, y)); }
inline bool is_two_torsion(const KChain& y) { return is_zero(y.scaled(2)); }

/// Reason why y * gamma_n (n >= 2) fails to be well defined on K_i in y's
/// coefficient mode, or nullopt if it is well defined.
inline std::optional<std::string> weak_gamma_violation(std::size_t i, const KChain& y, const std::string& name = "y") {
  if (is_zero(y)) return std::nullopt;
  const auto& t = *y.tower();
  const std::string ker = name + " ∉ ker τ_" + std::to_string(i);
  if (i == 0) return name + " must vanish: no divided powers on K_0";
  if (!t.integral() && t.modulus() != 2) {
    if (i % 2 == 0) return std::nullopt;
    return name + " must vanish: odd degree with odd p admits only γ_0 and γ_1";
  }
  if (!in_ker_tau(i, y)) return ker;
  if (t.integral() && i % 2 == 1 && !is_two_torsion(y)) return name + " is not 2-torsion";
  return std::nullopt;
}

class SideConditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// y . gamma_n(pres) with y over a prefix k_0 of the presentation's tower.
/// The side condition of the mode is checked first.
inline KChain weak_gamma(const KChain& y, std::int64_t n, const Presentation& pres) {
  if (n < 2) throw DomainError("weak divided powers need n >= 2");
  if (auto why = weak_gamma_violation(pres.degree(), y)) throw SideConditionError(*why);
  return inject_from_prefix(y, pres.tower()) * gamma(n, pres);
}

/// x -> sum_r y_r gamma_r(x) on K_i, coefficients y_r over the base k_0.
struct OperationSpec {
  std::size_t i = 0;
  TowerPtr base;
  std::map<std::size_t, KChain> coeffs;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline ValidationReport validate_operation_spec(const OperationSpec& spec) {
  ValidationReport rep;
  for (const auto& [r, y] : spec.coeffs) {
    if (y.tower() != spec.base) {
      rep.violations.push_back("y_" + std::to_string(r) + " is not over the base field");
      continue;
    }
    if (r < 2) continue;
    if (auto why = weak_gamma_violation(spec.i, y, "y_" + std::to_string(r))) rep.violations.push_back(*why);
  }
  return rep;
}

inline GradedChain evaluate_operation(const OperationSpec& spec, const Presentation& pres) {
  const auto rep = validate_operation_spec(spec);
  if (!rep.ok()) throw SideConditionError("invalid operation: " + rep.violations.front());
  if (pres.degree() != spec.i) throw DomainError("presentation degree does not match the operation");
  GradedChain out;
  for (const auto& [r, y] : spec.coeffs)
    accumulate(out, inject_from_prefix(y, pres.tower()) * gamma(static_cast<std::int64_t>(r), pres));
  return out;
}

inline GradedChain graded_sum(GradedChain a, const GradedChain& b) {
  for (const auto& [d, c] : b) accumulate(a, c);
  return a;
}

// ---------------------------------------------------------------------------
// Stiefel-Whitney classes

/// <a_1, ..., a_r>; characteristic != 2.
struct DiagonalForm {
  TowerPtr tower;
  std::vector<UnitElem> entries;
};

inline void check_sw_domain(const DiagonalForm& q) {
  if (q.tower->base()->characteristic() == 2) throw DomainError("Stiefel-Whitney classes need characteristic != 2");
  if (q.tower->modulus() != 2) throw DomainError("Stiefel-Whitney classes live in K_*/2; use mod 2 mode");
  for (const auto& a : q.entries)
    if (a.tower() != q.tower) throw DomainError("form entry over a different field");
}

/// {a_1} + ... + {a_r}, the presentation whose divided powers are the w_k.
inline Presentation sw_presentation(const DiagonalForm& q) {
  Presentation p(q.tower, 1);
  for (const auto& a : q.entries) p.push(1, Symbol({a}));
  return p;
}

/// w_0, ..., w_r of prod (1 + {a_k}).
inline std::vector<KChain> sw_total(const DiagonalForm& q) {
  check_sw_domain(q);
  const auto p = sw_presentation(q);
  std::vector<KChain> w;
  for (std::size_t k = 0; k <= q.entries.size(); ++k) w.push_back(gamma(static_cast<std::int64_t>(k), p));
  return w;
}

inline KChain sw_class(const DiagonalForm& q, std::size_t k) {
  check_sw_domain(q);
  if (k > q.entries.size()) return KChain(q.tower, k);
  return gamma(static_cast<std::int64_t>(k), sw_presentation(q));
}

struct IdentityResult {
  std::string name;
  bool holds = true;
};

struct SwReport {
  std::vector<IdentityResult> identities;
  bool all_hold() const {
    return std::all_of(identities.begin(), identities.end(), [](const auto& r) { return r.holds; });
  }
};

/// Checks w_3 = w_1 w_2, w_n = prod w_{2^i} over the binary digits of n and,
/// when -1 is a square, w_{2n} = gamma_n(w_2), w_{2n+1} = w_1 gamma_n(w_2) and
/// w_n = w_1^{e_0} prod_{i>=1} gamma_{2^{i-1}}(w_2). gamma_n(w_2) is taken on
/// the presentation of w_2 as the ordered sum of {a_j, a_k}, j < k.
inline SwReport sw_identities_check(const DiagonalForm& q, const NfOptions& opt = {}) {
  check_sw_domain(q);
  const auto w = sw_total(q);
  const std::size_t r = q.entries.size();
  const auto& t = q.tower;
  auto wk = [&](std::size_t k) { return k <= r ? w[k] : KChain(t, k); };
  SwReport rep;
  auto check = [&](std::string name, const KChain& a, const KChain& b) {
    rep.identities.push_back({std::move(name), equal(a, b, opt)});
  };
  check("w3 = w1*w2", wk(3), wk(1) * wk(2));
  for (std::size_t n = 1; n <= r; ++n) {
    KChain prod = KChain::unit(t);
    for (std::size_t bit = 0; (std::size_t(1) << bit) <= n; ++bit)
      if (n >> bit & 1u) prod = prod * wk(std::size_t(1) << bit);
    check("w" + std::to_string(n) + " = prod w_{2^i}", wk(n), prod);
  }
  const auto& f = *t->base();
  if (f.is_square(f.minus_one_code())) {
    const auto w2_pres = gamma_presentation(2, sw_presentation(q));
    for (std::size_t n = 1; 2 * n <= r + 1; ++n) {
      const auto g = gamma(static_cast<std::int64_t>(n), w2_pres);
      check("w" + std::to_string(2 * n) + " = gamma_" + std::to_string(n) + "(w2)", wk(2 * n), g);
      check("w" + std::to_string(2 * n + 1) + " = w1*gamma_" + std::to_string(n) + "(w2)", wk(2 * n + 1), wk(1) * g);
    }
    for (std::size_t n = 1; n <= r; ++n) {
      KChain prod = (n & 1u) ? wk(1) : KChain::unit(t);
      for (std::size_t bit = 1; (std::size_t(1) << bit) <= n; ++bit)
        if (n >> bit & 1u) prod = prod * gamma(static_cast<std::int64_t>(std::size_t(1) << (bit - 1)), w2_pres);
      check("w" + std::to_string(n) + " = w1^e0 * prod gamma_{2^(i-1)}(w2)", wk(n), prod);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Rewriting presentations without changing the class

struct MoveResult {
  Presentation pres;
  std::vector<std::string> trace;
};

namespace detail {

inline std::string pos_str(std::size_t k) { return std::to_string(k); }

inline bool try_move(Presentation& p, Xoshiro256& rng, const UnitShape& shape, std::vector<std::string>& trace) {
  const auto& t = p.tower();
  const std::size_t deg = p.degree();
  auto& terms = p.terms();
  switch (rng.below(5)) {
    case 0: {  // {.., uv, ..} -> {.., u, ..} + {.., v, ..}
      if (terms.empty() || deg == 0) return false;
      const auto k = rng.below(terms.size());
      const auto j = rng.below(deg);
      const auto u = random_unit(t, rng, shape);
      auto e1 = terms[k].symbol.entries();
      auto e2 = e1;
      e2[j] = e1[j] / u;
      e1[j] = u;
      const Int c = terms[k].coeff;
      terms[k] = PresentationTerm{c, Symbol(std::move(e1))};
      terms.insert(terms.begin() + static_cast<long>(k) + 1, PresentationTerm{c, Symbol(std::move(e2))});
      trace.push_back("split term " + pos_str(k) + " entry " + pos_str(j));
      return true;
    }
    case 1: {  // swap two entries, flip the sign
      if (terms.empty() || deg < 2) return false;
      const auto k = rng.below(terms.size());
      const auto a = rng.below(deg);
      auto b = rng.below(deg - 1);
      if (b >= a) ++b;
      auto e = terms[k].symbol.entries();
      std::swap(e[a], e[b]);
      terms[k] = PresentationTerm{-terms[k].coeff, Symbol(std::move(e))};
      trace.push_back("swap term " + pos_str(k) + " entries " + pos_str(a) + "," + pos_str(b));
      return true;
    }
    case 2: {  // insert c s and -c s
      const auto s = random_symbol(t, deg, rng, shape);
      const Int c = random_coeff(rng);
      p.insert(rng.below(terms.size() + 1), c, s);
      p.insert(rng.below(terms.size() + 1), -c, s);
      trace.push_back("insert cancelling pair");
      return true;
    }
    case 3: {  // multiply an entry by a p-th power
      if (t->integral() || terms.empty() || deg == 0) return false;
      const auto k = rng.below(terms.size());
      const auto j = rng.below(deg);
      auto e = terms[k].symbol.entries();
      e[j] = e[j] * random_unit(t, rng, shape).pow(Int(t->modulus()));
      terms[k] = PresentationTerm{terms[k].coeff, Symbol(std::move(e))};
      trace.push_back("p-th power into term " + pos_str(k) + " entry " + pos_str(j));
      return true;
    }
    default: {  // insert c {.., u, .., 1-u, ..}
      if (deg < 2) return false;
      if (t->base()->order() == 2 && t->num_vars() <= shape.first_var) return false;
      const auto u = random_steinberg_unit(t, rng, shape);
      const auto a = rng.below(deg);
      auto b = rng.below(deg - 1);
      if (b >= a) ++b;
      auto e = random_symbol(t, deg, rng, shape).entries();
      e[a] = u;
      e[b] = *one_minus(u);
      p.insert(rng.below(terms.size() + 1), random_coeff(rng), Symbol(std::move(e)));
      trace.push_back("insert Steinberg term");
      return true;
    }
  }
}

}  // namespace detail

/// Applies `count` random class-preserving rewrites: bilinear splits, entry
/// transpositions with a sign, cancelling pairs, p-th powers (mod p) and
/// Steinberg terms. With `verify` the class equality is checked.
inline MoveResult presentation_moves(const Presentation& pres, Xoshiro256& rng, std::size_t count,
                                     const UnitShape& shape = {}, bool verify = false) {
  MoveResult out{pres, {}};
  std::size_t done = 0;
  while (done < count)
    if (detail::try_move(out.pres, rng, shape, out.trace)) ++done;
  if (verify && !equal(out.pres.chain(), pres.chain()))
    throw std::logic_error("presentation move changed the class");
  return out;
}

inline MoveResult presentation_moves(const Presentation& pres, std::uint64_t seed, std::size_t count = 10,
                                     const UnitShape& shape = {}, bool verify = false) {
  Xoshiro256 rng(seed);
  return presentation_moves(pres, rng, count, shape, verify);
}

// ---------------------------------------------------------------------------
// Length and vanishing

/// Upper bound for the length: the number of symbols presented.
inline std::size_t length_upper_bound(const Presentation& pres) {
  return static_cast<std::size_t>(
      std::count_if(pres.terms().begin(), pres.terms().end(), [](const auto& t) { return t.coeff != 0; }));
}

/// Every symbol {g^{a_1}, ..., g^{a_n}} over F_q has zero normal form; all
/// tuples are enumerated. Needs m = 0 and n >= 2.
inline bool vanishing_check_exhaustive(const TowerPtr& t, std::size_t n) {
  if (t->num_vars() != 0) throw DomainError("exhaustive vanishing check is for finite fields");
  if (n < 2) throw DomainError("vanishing holds only in degree >= 2");
  const auto q1 = t->base()->unit_order();
  std::vector<std::uint32_t> a(n, 0);
  NfOptions opt;
  opt.degree_shortcut = false;
  for (;;) {
    std::vector<UnitElem> e;
    for (auto k : a) e.push_back(UnitElem::from_dlog(t, Int(k)));
    if (!is_zero(KChain::of(t, Symbol(std::move(e))), opt)) return false;
    std::size_t pos = 0;
    while (pos < n && ++a[pos] == q1) a[pos++] = 0;
    if (pos == n) return true;
  }
}

/// Random degree-n chains have zero normal form; requires n >= m + 2. The
/// recursion is run in full, without the degree shortcut.
inline bool vanishing_check(const TowerPtr& t, std::size_t n, Xoshiro256& rng, std::size_t samples = 20,
                            const UnitShape& shape = {}) {
  if (n < t->num_vars() + 2) throw DomainError("degree too small for vanishing");
  NfOptions opt;
  opt.degree_shortcut = false;
  for (std::size_t k = 0; k < samples; ++k)
    if (!is_zero(random_chain(t, n, 1 + rng.below(3), rng, shape), opt)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Additivity

struct AdditivityResult {
  bool additive = true;
  std::optional<std::pair<Presentation, Presentation>> witness;
};

/// Whether phi(x || y) = phi(x) + phi(y) on the sampled pairs: the zero pair,
/// a pair built on fresh variables (s_1 and s_2 + ... + s_R for the top R with
/// y_R != 0) when the tower has enough of them, and random pairs.
inline AdditivityResult additivity_check(const OperationSpec& spec, const TowerPtr& tower, Xoshiro256& rng,
                                         std::size_t samples = 10, const NfOptions& opt = {}) {
  const std::size_t i = spec.i;
  std::vector<std::pair<Presentation, Presentation>> pairs;
  pairs.emplace_back(Presentation(tower, i), Presentation(tower, i));

  std::size_t top = 0;
  for (const auto& [r, y] : spec.coeffs)
    if (!is_zero(y, opt)) top = std::max(top, r);
  const std::size_t fresh0 = spec.base->num_vars();
  if (top >= 2 && i >= 1 && tower->num_vars() >= fresh0 + top * i) {
    auto fresh_symbol = [&](std::size_t k) {
      std::vector<UnitElem> e;
      for (std::size_t j = 0; j < i; ++j) e.push_back(UnitElem::linear(tower, fresh0 + k * i + j, 0));
      return Symbol(std::move(e));
    };
    Presentation x(tower, i), y(tower, i);
    x.push(1, fresh_symbol(0));
    for (std::size_t k = 1; k < top; ++k) y.push(1, fresh_symbol(k));
    pairs.emplace_back(std::move(x), std::move(y));
  }
  UnitShape shape;
  for (std::size_t k = 0; k < samples; ++k)
    pairs.emplace_back(random_presentation(tower, i, 1 + rng.below(2), rng, shape),
                       random_presentation(tower, i, 1 + rng.below(2), rng, shape));

  for (const auto& [x, y] : pairs) {
    const auto lhs = evaluate_operation(spec, concat(x, y));
    const auto rhs = graded_sum(evaluate_operation(spec, x), evaluate_operation(spec, y));
    if (!equal(lhs, rhs, opt)) return {false, std::make_pair(x, y)};
  }
  return {true, std::nullopt};
}

}  // namespace milnor

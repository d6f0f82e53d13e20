#pragma once

// Canonical forms for classes of chains over F_q(t_1, ..., t_m).
//
// Milnor's split exact sequence
//   0 -> K_n(k) -> K_n(k(t)) -> (+)_P K_{n-1}(k_P) -> 0,   split by s_inf,
// determines x in K_n(k(t)) by s_inf(x) in K_n(k) and the residues d_P(x).
// For elements of G only rational places have nonzero residues, and their
// residue fields are again towers, so recursing down to F_q gives a finite
// tree. Over F_q: K_0 = Z, K_1 = Z/(q-1) via dlog, K_n = 0 for n >= 2.

#include <algorithm>
#include <future>
#include <memory>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "milnor/kchain.hpp"

namespace milnor {

class NormalForm;
struct NfResidue;

struct NfZero {
  friend bool operator==(const NfZero&, const NfZero&) { return true; }
};
struct NfK0 {
  Int value;
  friend bool operator==(const NfK0&, const NfK0&) = default;
};
struct NfK1 {
  Int value;
  friend bool operator==(const NfK1&, const NfK1&) = default;
};
struct NfNode {
  std::shared_ptr<const NormalForm> base;
  std::vector<NfResidue> residues;  // sorted by root key, no zero entries
};

/// A recursive (s_inf, residues) decomposition. Every zero class is the single
/// NfZero value, so equality of classes is structural equality.
class NormalForm {
 public:
  using Data = std::variant<NfZero, NfK0, NfK1, NfNode>;

  NormalForm() = default;
  explicit NormalForm(Data d) : data_(std::move(d)) {}

  const Data& data() const noexcept { return data_; }
  bool is_zero() const noexcept { return std::holds_alternative<NfZero>(data_); }

  friend bool operator==(const NormalForm& a, const NormalForm& b);

 private:
  Data data_{NfZero{}};
};

struct NfResidue {
  std::uint32_t root;  // field element code
  NormalForm nf;
};

inline bool operator==(const NormalForm& a, const NormalForm& b) {
  if (a.data_.index() != b.data_.index()) return false;
  if (const auto* x = std::get_if<NfNode>(&a.data_)) {
    const auto& y = std::get<NfNode>(b.data_);
    if (!(*x->base == *y.base) || x->residues.size() != y.residues.size()) return false;
    for (std::size_t k = 0; k < x->residues.size(); ++k)
      if (x->residues[k].root != y.residues[k].root || !(x->residues[k].nf == y.residues[k].nf)) return false;
    return true;
  }
  if (const auto* x = std::get_if<NfK0>(&a.data_)) return *x == std::get<NfK0>(b.data_);
  if (const auto* x = std::get_if<NfK1>(&a.data_)) return *x == std::get<NfK1>(b.data_);
  return true;
}

struct NfOptions {
  /// Return zero at once when the degree exceeds what the tower can carry
  /// (n >= m + 2, or n >= m + 1 when K_1(F_q) vanishes in this mode).
  bool degree_shortcut = true;
  /// Evaluate the top-level places concurrently.
  bool parallel = false;
  CollapseOrder order = CollapseOrder::bubble_left;
};

namespace detail {

inline bool degree_vanishes(const TowerField& t, std::size_t degree) {
  const std::size_t leaf = t.k1_modulus() == 1 ? 1 : 2;
  return degree >= t.num_vars() + leaf;
}

// Drops terms that are zero for trivial reasons: an entry that is a constant
// whose class in K_1(F_q) (tensor coefficients) vanishes, or a coefficient
// divisible by p in mod-p mode. Coefficients are reduced mod p.
inline KChain prune(const KChain& x) {
  const auto& t = *x.tower();
  const auto m1 = t.k1_modulus();
  KChain out(x.tower(), x.degree());
  for (const auto& [s, c] : x.terms()) {
    const Int cc = t.integral() ? c : mod_floor(c, Int(t.modulus()));
    bool dead = cc == 0;
    for (const auto& e : s.entries())
      if (e.is_constant() && e.const_dlog() % m1 == 0) dead = true;
    if (!dead) out.add_term(s, cc);
  }
  return out;
}

inline bool involves_top(const KChain& x) {
  const std::size_t m = x.tower()->num_vars() - 1;
  for (const auto& [s, c] : x.terms())
    for (const auto& e : s.entries())
      for (const auto& f : e.factors())
        if (f.var == m) return true;
  return false;
}

inline std::vector<std::uint32_t> top_roots(const KChain& x) {
  const auto& tower = *x.tower();
  const std::size_t m = tower.num_vars() - 1;
  std::set<std::pair<std::uint32_t, std::uint32_t>> keyed;
  for (const auto& [s, c] : x.terms())
    for (const auto& e : s.entries())
      for (const auto& f : e.factors())
        if (f.var == m) keyed.emplace(root_key(*tower.base(), f.root), f.root);
  std::vector<std::uint32_t> roots;
  for (const auto& [k, r] : keyed) roots.push_back(r);
  return roots;
}

inline NormalForm leaf(const KChain& x) {
  const auto& tower = *x.tower();
  if (x.degree() == 0) {
    Int v = 0;
    for (const auto& [s, c] : x.terms()) v += c;
    if (!tower.integral()) v = mod_floor(v, Int(tower.modulus()));
    return v == 0 ? NormalForm{} : NormalForm(NfK0{v});
  }
  if (x.degree() == 1) {
    const auto m1 = tower.k1_modulus();
    Int v = 0;
    for (const auto& [s, c] : x.terms()) v += c * s[0].const_dlog();
    v = mod_floor(v, Int(m1));
    return v == 0 ? NormalForm{} : NormalForm(NfK1{v});
  }
  return NormalForm{};
}

inline NormalForm normal_form_rec(const KChain& x, const NfOptions& opt, bool top);

inline NormalForm make_node(NormalForm base, std::vector<NfResidue> residues) {
  if (base.is_zero() && residues.empty()) return NormalForm{};
  return NormalForm(NfNode{std::make_shared<const NormalForm>(std::move(base)), std::move(residues)});
}

inline NormalForm normal_form_rec(const KChain& raw, const NfOptions& opt, bool top) {
  const KChain x = prune(raw);
  const auto& tower = x.tower();
  if (x.empty()) return NormalForm{};
  if (opt.degree_shortcut && degree_vanishes(*tower, x.degree())) return NormalForm{};
  if (tower->num_vars() == 0) return leaf(x);

  const auto inner = tower->drop_top();
  if (x.degree() == 0 || !involves_top(x)) {
    // x lies in the image of K_*(k): no residues, s_inf(x) = x.
    return make_node(normal_form_rec(x.retyped(inner), opt, false), {});
  }

  const auto roots = top_roots(x);
  auto residue_at = [&](std::uint32_t a) {
    return normal_form_rec(residue(x, Place::finite(a), opt.order), opt, false);
  };
  std::vector<NormalForm> parts(roots.size());
  NormalForm base;
  if (opt.parallel && top) {
    std::vector<std::future<NormalForm>> jobs;
    for (auto a : roots) jobs.push_back(std::async(std::launch::async, residue_at, a));
    base = normal_form_rec(s_infinity(x, opt.order), opt, false);
    for (std::size_t k = 0; k < roots.size(); ++k) parts[k] = jobs[k].get();
  } else {
    base = normal_form_rec(s_infinity(x, opt.order), opt, false);
    for (std::size_t k = 0; k < roots.size(); ++k) parts[k] = residue_at(roots[k]);
  }
  std::vector<NfResidue> residues;
  for (std::size_t k = 0; k < roots.size(); ++k)
    if (!parts[k].is_zero()) residues.push_back(NfResidue{roots[k], std::move(parts[k])});
  return make_node(std::move(base), std::move(residues));
}

}  // namespace detail

/// Canonical form of the class of x in K_n(F), or in K_n(F)/p in mod-p mode.
inline NormalForm normal_form(const KChain& x, const NfOptions& opt = {}) {
  return detail::normal_form_rec(x, opt, true);
}

inline bool is_zero(const KChain& x, const NfOptions& opt = {}) { return normal_form(x, opt).is_zero(); }

/// Equality of classes. Operands must share tower (hence coefficient mode).
inline bool equal(const KChain& x, const KChain& y, const NfOptions& opt = {}) {
  if (x.tower() != y.tower()) throw DomainError("comparing chains over different fields or modes");
  if (x.degree() != y.degree() && !x.empty() && !y.empty()) return false;
  return normal_form(x, opt) == normal_form(y, opt);
}

/// Degree-wise equality of mixed-degree elements.
inline bool equal(const GradedChain& x, const GradedChain& y, const NfOptions& opt = {}) {
  std::set<std::size_t> degrees;
  for (const auto& [d, c] : x) degrees.insert(d);
  for (const auto& [d, c] : y) degrees.insert(d);
  for (auto d : degrees) {
    const auto a = x.find(d), b = y.find(d);
    const NormalForm na = a == x.end() ? NormalForm{} : normal_form(a->second, opt);
    const NormalForm nb = b == y.end() ? NormalForm{} : normal_form(b->second, opt);
    if (!(na == nb)) return false;
  }
  return true;
}

/// Finite places of the top variable at which x has a nonzero residue.
inline std::vector<Place> support(const KChain& x, const NfOptions& opt = {}) {
  if (x.tower()->num_vars() == 0) throw DomainError("support needs a variable");
  std::vector<Place> out;
  if (x.degree() == 0) return out;
  for (auto a : detail::top_roots(x))
    if (!normal_form(residue(x, Place::finite(a), opt.order), opt).is_zero()) out.push_back(Place::finite(a));
  return out;
}

/// Sum of normal forms in the group they describe (leaf arithmetic mod the
/// tower's K_0 and K_1 orders).
inline NormalForm add(const NormalForm& a, const NormalForm& b, const TowerField& tower) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.data().index() != b.data().index()) throw DomainError("adding normal forms of different shapes");
  if (const auto* x = std::get_if<NfK0>(&a.data())) {
    Int v = x->value + std::get<NfK0>(b.data()).value;
    if (!tower.integral()) v = mod_floor(v, Int(tower.modulus()));
    return v == 0 ? NormalForm{} : NormalForm(NfK0{v});
  }
  if (const auto* x = std::get_if<NfK1>(&a.data())) {
    const Int v = mod_floor(x->value + std::get<NfK1>(b.data()).value, Int(tower.k1_modulus()));
    return v == 0 ? NormalForm{} : NormalForm(NfK1{v});
  }
  const auto& x = std::get<NfNode>(a.data());
  const auto& y = std::get<NfNode>(b.data());
  const auto& f = *tower.base();
  std::vector<NfResidue> merged;
  std::size_t i = 0, j = 0;
  while (i < x.residues.size() || j < y.residues.size()) {
    if (j == y.residues.size() ||
        (i < x.residues.size() && root_key(f, x.residues[i].root) < root_key(f, y.residues[j].root))) {
      merged.push_back(x.residues[i++]);
    } else if (i == x.residues.size() || root_key(f, y.residues[j].root) < root_key(f, x.residues[i].root)) {
      merged.push_back(y.residues[j++]);
    } else {
      auto s = add(x.residues[i].nf, y.residues[j].nf, tower);
      if (!s.is_zero()) merged.push_back(NfResidue{x.residues[i].root, std::move(s)});
      ++i;
      ++j;
    }
  }
  return detail::make_node(add(*x.base, *y.base, tower), std::move(merged));
}

}  // namespace milnor

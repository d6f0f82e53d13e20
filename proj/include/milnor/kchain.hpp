#pragma once

// Symbols {x_1, ..., x_n} and formal integer combinations of them, with the
// graded product, residue maps, specialization maps and the inclusion of the
// residue field.
//
// Chains are formal: no relation of K-theory is applied syntactically. Two
// chains represent the same class exactly when their normal forms agree (see
// normal_form.hpp).

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "milnor/bigint.hpp"
#include "milnor/error.hpp"
#include "milnor/tower.hpp"

namespace milnor {

/// An ordered list of units; degree 0 is the unit of the graded ring.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::vector<UnitElem> entries) : entries_(std::move(entries)) {
    for (const auto& e : entries_)
      if (e.tower() != entries_.front().tower()) throw DomainError("symbol entries over different fields");
  }

  std::size_t degree() const noexcept { return entries_.size(); }
  const std::vector<UnitElem>& entries() const noexcept { return entries_; }
  const UnitElem& operator[](std::size_t k) const { return entries_.at(k); }

  friend Symbol operator*(const Symbol& a, const Symbol& b) {
    std::vector<UnitElem> e = a.entries_;
    e.insert(e.end(), b.entries_.begin(), b.entries_.end());
    return Symbol(std::move(e));
  }

  friend bool operator==(const Symbol& a, const Symbol& b) { return a.entries_ == b.entries_; }
  friend bool operator<(const Symbol& a, const Symbol& b) {
    const std::size_t n = std::min(a.entries_.size(), b.entries_.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (a.entries_[k] < b.entries_[k]) return true;
      if (b.entries_[k] < a.entries_[k]) return false;
    }
    return a.entries_.size() < b.entries_.size();
  }

  Symbol retyped(const TowerPtr& target) const {
    std::vector<UnitElem> e;
    e.reserve(entries_.size());
    for (const auto& u : entries_) e.push_back(u.retyped(target));
    return Symbol(std::move(e));
  }

 private:
  std::vector<UnitElem> entries_;
};

/// A finite integer combination of symbols of one degree over one tower.
/// Coefficients stay integral in every coefficient mode; reduction mod p
/// happens only inside normal forms.
class KChain {
 public:
  KChain(TowerPtr tower, std::size_t degree) : tower_(std::move(tower)), degree_(degree) {}

  static KChain of(TowerPtr tower, const Symbol& s, const Int& coeff = 1) {
    KChain c(std::move(tower), s.degree());
    c.add_term(s, coeff);
    return c;
  }

  static KChain of(const UnitElem& u) { return of(u.tower(), Symbol({u})); }

  /// The empty symbol with coefficient 1.
  static KChain unit(TowerPtr tower) { return of(std::move(tower), Symbol{}); }

  const TowerPtr& tower() const noexcept { return tower_; }
  std::size_t degree() const noexcept { return degree_; }
  const std::map<Symbol, Int>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  void add_term(const Symbol& s, const Int& coeff) {
    if (coeff == 0) return;
    if (s.degree() != degree_) {
      if (!terms_.empty()) throw DomainError("symbol degree does not match chain degree");
      degree_ = s.degree();
    }
    if (s.degree() && s[0].tower() != tower_) throw DomainError("symbol over a different field");
    auto [it, inserted] = terms_.try_emplace(s, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }

  KChain& operator+=(const KChain& o) {
    check_compatible(o);
    for (const auto& [s, c] : o.terms_) add_term(s, c);
    return *this;
  }
  KChain& operator-=(const KChain& o) {
    check_compatible(o);
    for (const auto& [s, c] : o.terms_) add_term(s, -c);
    return *this;
  }
  friend KChain operator+(KChain a, const KChain& b) { return a += b; }
  friend KChain operator-(KChain a, const KChain& b) { return a -= b; }
  KChain operator-() const { return scaled(-1); }

  KChain scaled(const Int& k) const {
    KChain r(tower_, degree_);
    if (k == 0) return r;
    for (const auto& [s, c] : terms_) r.terms_.emplace(s, c * k);
    return r;
  }

  /// Graded product: bilinear concatenation of entry lists.
  friend KChain operator*(const KChain& a, const KChain& b) {
    if (a.tower_ != b.tower_) throw DomainError("product of chains over different fields");
    KChain r(a.tower_, a.degree_ + b.degree_);
    for (const auto& [s, c] : a.terms_)
      for (const auto& [t, d] : b.terms_) r.add_term(s * t, c * d);
    return r;
  }

  friend bool operator==(const KChain& a, const KChain& b) {
    return a.tower_ == b.tower_ && a.terms_ == b.terms_ && (a.degree_ == b.degree_ || a.terms_.empty());
  }

  /// The same chain viewed over a tower that extends this one by further
  /// variables (or drops unused trailing ones).
  KChain retyped(const TowerPtr& target) const {
    if (target->modulus() != tower_->modulus()) throw DomainError("coefficient modes differ");
    KChain r(target, degree_);
    for (const auto& [s, c] : terms_) r.terms_.emplace(s.retyped(target), c);
    return r;
  }

 private:
  void check_compatible(const KChain& o) const {
    if (o.tower_ != tower_) throw DomainError("chains over different fields");
    if (o.degree_ != degree_ && !o.terms_.empty() && !terms_.empty())
      throw DomainError("chains of different degrees");
  }

  TowerPtr tower_;
  std::size_t degree_;
  std::map<Symbol, Int> terms_;
};

inline KChain product(const KChain& x, const KChain& y) { return x * y; }

/// How repeated uniformizers are eliminated after they have been moved to the
/// front of a term. Both orders give the same class; only signs of 2-torsion
/// terms differ.
enum class CollapseOrder {
  /// Collapse the leftmost pair {pi, pi} -> {pi, -1}, move the next pi to the
  /// front past the -1 entries, repeat.
  bubble_left,
  /// Collapse the rightmost pair first; no further moves are needed.
  rightmost_first,
};

/// Residue map at a rational place of the top variable; degree drops by one.
inline KChain residue(const KChain& x, const Place& P, CollapseOrder order = CollapseOrder::bubble_left) {
  const auto& tower = x.tower();
  if (tower->num_vars() == 0) throw DomainError("residue map needs a variable");
  if (x.degree() == 0) throw DomainError("residue of a degree-0 element");
  const auto inner = tower->drop_top();
  const auto minus_one = UnitElem::minus_one(inner);
  KChain out(inner, x.degree() - 1);

  std::vector<Int> vals;
  std::vector<UnitElem> res;
  std::vector<std::size_t> ramified;
  for (const auto& [sym, coeff] : x.terms()) {
    const std::size_t n = sym.degree();
    vals.clear();
    res.clear();
    ramified.clear();
    for (std::size_t k = 0; k < n; ++k) {
      vals.push_back(valuation(sym[k], P));
      res.push_back(residue_unit(sym[k], P));
      if (vals.back() != 0) ramified.push_back(k);
    }
    // Each entry is pi^v * u. Expand bilinearly; a term keeps pi at the
    // positions in `mask`. Terms without pi have zero residue.
    const std::size_t r = ramified.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << r); ++mask) {
      Int c = coeff;
      std::vector<bool> is_pi(n, false);
      std::size_t k_pi = 0;
      for (std::size_t b = 0; b < r; ++b) {
        if (mask >> b & 1u) {
          is_pi[ramified[b]] = true;
          c *= vals[ramified[b]];
          ++k_pi;
        }
      }
      // Moving every pi to the front: one sign per unit it passes.
      std::size_t units_seen = 0, transpositions = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (is_pi[k])
          transpositions += units_seen;
        else
          ++units_seen;
      }
      if (order == CollapseOrder::bubble_left) transpositions += (k_pi - 1) * (k_pi >= 2 ? k_pi - 2 : 0) / 2;
      if (transpositions % 2) c = -c;
      // {pi, -1, ..., -1, u...} -> {-1, ..., -1, u...}
      std::vector<UnitElem> entries;
      entries.reserve(n - 1);
      for (std::size_t k = 1; k < k_pi; ++k) entries.push_back(minus_one);
      for (std::size_t k = 0; k < n; ++k)
        if (!is_pi[k]) entries.push_back(res[k]);
      out.add_term(Symbol(std::move(entries)), c);
    }
  }
  return out;
}

/// s_pi(x) = residue({-pi} . x); pi must have valuation exactly 1 at P.
inline KChain specialize(const KChain& x, const Place& P, const UnitElem& pi,
                         CollapseOrder order = CollapseOrder::bubble_left) {
  if (pi.tower() != x.tower()) throw DomainError("uniformizer over a different field");
  if (valuation(pi, P) != 1) throw DomainError("uniformizer must have valuation 1 at the place");
  const auto neg_pi = UnitElem::minus_one(x.tower()) * pi;
  return residue(KChain::of(neg_pi) * x, P, order);
}

/// Specialization at infinity with the fixed uniformizer t_m^{-1}.
inline KChain s_infinity(const KChain& x, CollapseOrder order = CollapseOrder::bubble_left) {
  const auto P = Place::infinity();
  return specialize(x, P, uniformizer(x.tower(), P), order);
}

/// Inclusion k -> k(t_m) of the dropped tower into `tower`.
inline KChain inject(const KChain& x, const TowerPtr& tower) {
  if (tower->num_vars() == 0 || x.tower() != tower->drop_top())
    throw DomainError("inject expects a chain over the tower with its top variable dropped");
  return x.retyped(tower);
}

/// Inclusion of any prefix tower k_0 = F_q(t_1..t_j) into `tower`.
inline KChain inject_from_prefix(const KChain& x, const TowerPtr& tower) {
  const auto j = x.tower()->num_vars();
  if (j > tower->num_vars() || tower->prefix(j) != x.tower())
    throw DomainError("chain is not over a prefix of the target tower");
  return x.retyped(tower);
}

/// Product of chains of mixed degree, keyed by degree.
using GradedChain = std::map<std::size_t, KChain>;

inline void accumulate(GradedChain& g, const KChain& x) {
  if (x.empty()) return;
  auto it = g.find(x.degree());
  if (it == g.end())
    g.emplace(x.degree(), x);
  else
    it->second += x;
}

}  // namespace milnor

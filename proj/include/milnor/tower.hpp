#pragma once

// Iterated rational function fields F_q(t_1, ..., t_m) and the multiplicative
// subgroup G of elements c * prod (t_j - a)^e with a in F_q.
//
// Residues and specializations only ever act on the outermost variable t_m;
// build the tower in a different order to ramify along another variable.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "milnor/bigint.hpp"
#include "milnor/error.hpp"
#include "milnor/gf.hpp"

namespace milnor {

class TowerField;
using TowerPtr = std::shared_ptr<const TowerField>;

/// F_q(t_1, ..., t_m) together with the coefficient ring of K-theory: either
/// the integers (modulus() == 0) or Z/p. p may equal the characteristic.
class TowerField {
 public:
  static constexpr std::uint32_t kIntegral = 0;

  /// Cached: equal arguments give the identical pointer, so towers compare by
  /// address.
  static TowerPtr make(FieldPtr base, std::vector<std::string> vars, std::uint32_t modulus = kIntegral) {
    if (!base) throw DomainError("missing base field");
    for (std::size_t k = 0; k < vars.size(); ++k) {
      const auto& v = vars[k];
      if (v.empty() || !(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_'))
        throw DomainError("invalid variable name '" + v + "'");
      for (char ch : v)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
          throw DomainError("invalid variable name '" + v + "'");
      if (v == "g" || v == "mod" || v == "integral" || v == "inf")
        throw DomainError("'" + v + "' is reserved and cannot name a variable");
      for (std::size_t j = 0; j < k; ++j)
        if (vars[j] == v) throw DomainError("duplicate variable name '" + v + "'");
    }
    if (modulus != kIntegral && !detail::is_prime(modulus))
      throw DomainError("coefficient modulus " + std::to_string(modulus) + " is not prime");

    static std::mutex mu;
    static std::map<std::tuple<const FqField*, std::vector<std::string>, std::uint32_t>, TowerPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{base.get(), vars, modulus}];
    if (!slot) slot = TowerPtr(new TowerField(std::move(base), std::move(vars), modulus));
    return slot;
  }

  const FieldPtr& base() const noexcept { return base_; }
  std::size_t num_vars() const noexcept { return vars_.size(); }
  const std::vector<std::string>& vars() const noexcept { return vars_; }
  const std::string& var(std::size_t j) const { return vars_.at(j); }
  std::uint32_t modulus() const noexcept { return modulus_; }
  bool integral() const noexcept { return modulus_ == kIntegral; }

  std::optional<std::size_t> var_index(const std::string& name) const {
    for (std::size_t j = 0; j < vars_.size(); ++j)
      if (vars_[j] == name) return j;
    return std::nullopt;
  }

  /// The residue field at any rational place of the top variable.
  TowerPtr drop_top() const {
    if (vars_.empty()) throw DomainError("the finite field has no variable to drop");
    return prefix(vars_.size() - 1);
  }

  TowerPtr prefix(std::size_t k) const {
    if (k > vars_.size()) throw DomainError("prefix longer than the tower");
    return make(base_, std::vector<std::string>(vars_.begin(), vars_.begin() + static_cast<long>(k)), modulus_);
  }

  TowerPtr with_modulus(std::uint32_t modulus) const { return make(base_, vars_, modulus); }

  /// Order of K_0 of the coefficient ring: p, or 0 for Z.
  std::uint32_t k0_modulus() const noexcept { return modulus_; }

  /// Order of K_1(F_q) tensored with the coefficients: q - 1 integrally,
  /// gcd(p, q - 1) mod p.
  std::uint32_t k1_modulus() const noexcept {
    const std::uint32_t n = base_->unit_order();
    return integral() ? n : std::gcd(n, modulus_);
  }

  /// "GF(5)(t,u) mod 2" style description; parses back to the same tower.
  std::string describe() const {
    std::string s = "GF(" + std::to_string(base_->characteristic());
    if (base_->degree() > 1) s += "^" + std::to_string(base_->degree());
    s += ")";
    if (!vars_.empty()) {
      s += "(";
      for (std::size_t j = 0; j < vars_.size(); ++j) s += (j ? "," : "") + vars_[j];
      s += ")";
    }
    s += integral() ? " integral" : " mod " + std::to_string(modulus_);
    return s;
  }

 private:
  TowerField(FieldPtr base, std::vector<std::string> vars, std::uint32_t modulus)
      : base_(std::move(base)), vars_(std::move(vars)), modulus_(modulus) {}

  FieldPtr base_;
  std::vector<std::string> vars_;
  std::uint32_t modulus_;
};

inline TowerPtr make_tower(FieldPtr base, std::vector<std::string> vars, std::uint32_t modulus = TowerField::kIntegral) {
  return TowerField::make(std::move(base), std::move(vars), modulus);
}

/// Sort key for roots: zero first, then by discrete log.
inline std::uint32_t root_key(const FqField& f, std::uint32_t code) { return code == 0 ? 0 : f.dlog(code) + 1; }

/// (t_var - root)^exp
struct LinearFactor {
  std::uint32_t var;
  std::uint32_t root;  // field element code
  Int exp;
};

/// A rational place of the top variable: t_m = a, or infinity.
struct Place {
  bool infinite = false;
  std::uint32_t root = 0;

  static Place finite(std::uint32_t root_code) { return {false, root_code}; }
  static Place infinity() { return {true, 0}; }

  friend bool operator==(const Place&, const Place&) = default;
};

/// An element c * prod (t_j - a)^e of the unit group G. Never zero. Factors are
/// kept sorted by (variable, root key) with zero exponents removed, so equal
/// elements have identical representations.
class UnitElem {
 public:
  static UnitElem one(TowerPtr tower) { return UnitElem(std::move(tower), 0, {}); }

  static UnitElem from_dlog(TowerPtr tower, const Int& k) {
    const auto n = tower->base()->unit_order();
    return UnitElem(std::move(tower), static_cast<std::uint32_t>(mod_u64(k, n)), {});
  }

  static UnitElem constant(TowerPtr tower, const FqElem& c) {
    if (c.field() != tower->base()) throw DomainError("constant from a different field");
    if (c.is_zero()) throw DomainError("zero is not a unit");
    return UnitElem(std::move(tower), c.dlog(), {});
  }

  static UnitElem constant_code(TowerPtr tower, std::uint32_t code) {
    if (code == 0) throw DomainError("zero is not a unit");
    const auto k = tower->base()->dlog(code);
    return UnitElem(std::move(tower), k, {});
  }

  static UnitElem minus_one(TowerPtr tower) {
    const auto code = tower->base()->minus_one_code();
    return constant_code(std::move(tower), code);
  }

  /// t_var - root
  static UnitElem linear(TowerPtr tower, std::size_t var, std::uint32_t root_code) {
    if (var >= tower->num_vars()) throw DomainError("unknown variable index " + std::to_string(var));
    if (root_code >= tower->base()->order()) throw DomainError("root outside the base field");
    return UnitElem(std::move(tower), 0, {LinearFactor{static_cast<std::uint32_t>(var), root_code, 1}});
  }

  static UnitElem linear(TowerPtr tower, const std::string& var, const FqElem& root) {
    const auto j = tower->var_index(var);
    if (!j) throw DomainError("unknown variable '" + var + "'");
    if (root.field() != tower->base()) throw DomainError("root from a different field");
    return linear(std::move(tower), *j, root.code());
  }

  const TowerPtr& tower() const noexcept { return tower_; }
  std::uint32_t const_dlog() const noexcept { return const_dlog_; }
  const std::vector<LinearFactor>& factors() const noexcept { return factors_; }

  FqElem constant_part() const { return tower_->base()->element(tower_->base()->exp(std::uint64_t(const_dlog_))); }
  std::uint32_t constant_code() const { return tower_->base()->exp(std::uint64_t(const_dlog_)); }

  bool is_one() const noexcept { return const_dlog_ == 0 && factors_.empty(); }
  bool is_constant() const noexcept { return factors_.empty(); }

  Int exponent(std::size_t var, std::uint32_t root_code) const {
    for (const auto& f : factors_)
      if (f.var == var && f.root == root_code) return f.exp;
    return 0;
  }

  UnitElem inverse() const {
    UnitElem r = *this;
    const auto n = tower_->base()->unit_order();
    r.const_dlog_ = (n - const_dlog_) % n;
    for (auto& f : r.factors_) f.exp = -f.exp;
    return r;
  }

  UnitElem pow(const Int& e) const {
    if (e == 0) return one(tower_);
    UnitElem r = *this;
    const auto n = tower_->base()->unit_order();
    r.const_dlog_ = static_cast<std::uint32_t>(mod_u64(Int(const_dlog_) * e, n));
    for (auto& f : r.factors_) f.exp *= e;
    return r;
  }

  friend UnitElem operator*(const UnitElem& a, const UnitElem& b) {
    if (a.tower_ != b.tower_) throw DomainError("units over different fields");
    const auto& f = *a.tower_->base();
    std::vector<LinearFactor> out;
    out.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin(), j = b.factors_.begin();
    while (i != a.factors_.end() || j != b.factors_.end()) {
      if (j == b.factors_.end() || (i != a.factors_.end() && key(f, *i) < key(f, *j))) {
        out.push_back(*i++);
      } else if (i == a.factors_.end() || key(f, *j) < key(f, *i)) {
        out.push_back(*j++);
      } else {
        Int e = i->exp + j->exp;
        if (e != 0) out.push_back(LinearFactor{i->var, i->root, std::move(e)});
        ++i;
        ++j;
      }
    }
    const auto n = f.unit_order();
    return UnitElem(a.tower_, (a.const_dlog_ + b.const_dlog_) % n, std::move(out));
  }

  friend UnitElem operator/(const UnitElem& a, const UnitElem& b) { return a * b.inverse(); }

  friend bool operator==(const UnitElem& a, const UnitElem& b) {
    if (a.tower_ != b.tower_ || a.const_dlog_ != b.const_dlog_ || a.factors_.size() != b.factors_.size()) return false;
    for (std::size_t k = 0; k < a.factors_.size(); ++k) {
      const auto& x = a.factors_[k];
      const auto& y = b.factors_[k];
      if (x.var != y.var || x.root != y.root || x.exp != y.exp) return false;
    }
    return true;
  }

  /// Total order used for keys of chains; meaningful only within one tower.
  friend bool operator<(const UnitElem& a, const UnitElem& b) {
    if (a.const_dlog_ != b.const_dlog_) return a.const_dlog_ < b.const_dlog_;
    const auto& f = *a.tower_->base();
    const std::size_t n = std::min(a.factors_.size(), b.factors_.size());
    for (std::size_t k = 0; k < n; ++k) {
      const auto& x = a.factors_[k];
      const auto& y = b.factors_[k];
      const auto kx = key(f, x), ky = key(f, y);
      if (kx != ky) return kx < ky;
      if (x.exp != y.exp) return x.exp < y.exp;
    }
    return a.factors_.size() < b.factors_.size();
  }

  /// Same element viewed in another tower that contains all its variables
  /// under the same indices (a prefix extension).
  UnitElem retyped(TowerPtr target) const {
    if (target->base() != tower_->base()) throw DomainError("retyping across base fields");
    for (const auto& f : factors_)
      if (f.var >= target->num_vars() || target->var(f.var) != tower_->var(f.var))
        throw DomainError("variable missing from target tower");
    return UnitElem(std::move(target), const_dlog_, factors_);
  }

 private:
  UnitElem(TowerPtr tower, std::uint32_t c, std::vector<LinearFactor> factors)
      : tower_(std::move(tower)), const_dlog_(c), factors_(std::move(factors)) {}

  static std::pair<std::uint32_t, std::uint32_t> key(const FqField& f, const LinearFactor& x) {
    return {x.var, root_key(f, x.root)};
  }

  TowerPtr tower_;
  std::uint32_t const_dlog_;
  std::vector<LinearFactor> factors_;
};

inline std::size_t top_var(const TowerField& t) {
  if (t.num_vars() == 0) throw DomainError("the finite field has no places");
  return t.num_vars() - 1;
}

/// Valuation at a rational place of the top variable.
inline Int valuation(const UnitElem& u, const Place& P) {
  const std::size_t m = top_var(*u.tower());
  Int v = 0;
  for (const auto& f : u.factors()) {
    if (f.var != m) continue;
    if (P.infinite)
      v -= f.exp;
    else if (f.root == P.root)
      v += f.exp;
  }
  return v;
}

/// Standard uniformizer: t_m - a at a finite place, t_m^{-1} at infinity.
inline UnitElem uniformizer(const TowerPtr& tower, const Place& P) {
  const std::size_t m = top_var(*tower);
  const auto t = UnitElem::linear(tower, m, P.infinite ? 0 : P.root);
  return P.infinite ? t.inverse() : t;
}

/// Image in the residue field of u * pi^{-v_P(u)}, pi the standard uniformizer.
inline UnitElem residue_unit(const UnitElem& u, const Place& P) {
  const auto& tower = u.tower();
  const std::size_t m = top_var(*tower);
  const auto& f = *tower->base();
  const auto n = f.unit_order();
  Int c = u.const_dlog();
  std::vector<LinearFactor> inner;
  UnitElem out = UnitElem::one(tower->drop_top());
  for (const auto& x : u.factors()) {
    if (x.var != m) {
      out = out * UnitElem::linear(out.tower(), x.var, x.root).pow(x.exp);
      continue;
    }
    // (t - b)/t -> 1 at infinity; (t - b) -> a - b at t = a, b != a.
    if (P.infinite || x.root == P.root) continue;
    const auto diff = f.sub(P.root, x.root);
    c += Int(f.dlog(diff)) * x.exp;
  }
  return out * UnitElem::from_dlog(out.tower(), mod_floor(c, Int(n)));
}

/// 1 - u when it lies in G, otherwise nullopt. Covers constants, c(t - a),
/// c(t - a)^{-1} and c(t - a)/(t - b) in a single variable.
inline std::optional<UnitElem> one_minus(const UnitElem& u) {
  if (u.is_one()) throw DomainError("1 - u vanishes for u = 1");
  const auto& tower = u.tower();
  const auto& f = *tower->base();
  const std::uint32_t c = u.constant_code();
  const auto& fs = u.factors();
  if (fs.empty()) return UnitElem::constant_code(tower, f.sub(1, c));
  if (fs.size() == 1 && fs[0].exp == 1) {
    // 1 - c(t - a) = -c (t - (a + 1/c))
    const auto root = f.add(fs[0].root, f.inv(c));
    return UnitElem::constant_code(tower, f.neg(c)) * UnitElem::linear(tower, fs[0].var, root);
  }
  if (fs.size() == 1 && fs[0].exp == -1) {
    // 1 - c/(t - a) = (t - (a + c)) / (t - a)
    const auto root = f.add(fs[0].root, c);
    return UnitElem::linear(tower, fs[0].var, root) / UnitElem::linear(tower, fs[0].var, fs[0].root);
  }
  if (fs.size() == 2 && fs[0].var == fs[1].var && fs[0].exp + fs[1].exp == 0 && abs(fs[0].exp) == 1) {
    // 1 - c(t - a)/(t - b) = ((1 - c) t - b + c a) / (t - b)
    const auto& num = fs[0].exp == 1 ? fs[0] : fs[1];
    const auto& den = fs[0].exp == 1 ? fs[1] : fs[0];
    const std::size_t var = num.var;
    const auto lead = f.sub(1, c);
    const auto constant = f.sub(f.mul(c, num.root), den.root);  // c a - b
    const auto denom = UnitElem::linear(tower, var, den.root);
    if (lead == 0) return UnitElem::constant_code(tower, constant) / denom;
    // (1 - c)(t + constant/(1 - c))
    const auto root = f.neg(f.mul(constant, f.inv(lead)));
    return UnitElem::constant_code(tower, lead) * UnitElem::linear(tower, var, root) / denom;
  }
  return std::nullopt;
}

}  // namespace milnor

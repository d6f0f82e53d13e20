#pragma once

// Small finite fields F_q, q = p^d <= 2^16, with full log/antilog tables.
//
// Elements are addressed by a code: the coefficient vector (c_0, ..., c_{d-1})
// of the polynomial representative, packed as sum c_i p^i. The modulus is the
// lexicographically smallest monic irreducible polynomial of degree d, and the
// generator is the smallest primitive element, both compared on coefficient
// vectors read from the constant term up.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "milnor/bigint.hpp"
#include "milnor/error.hpp"

namespace milnor {

class FqField;
class FqElem;
using FieldPtr = std::shared_ptr<const FqField>;

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 2; k * k <= n; ++k) {
    if (n % k == 0) {
      out.push_back(k);
      while (n % k == 0) n /= k;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Dense polynomials over F_p, constant term first.
using Poly = std::vector<std::uint32_t>;

inline void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod_prime(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1u) {
    if (e & 1u) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint32_t>(r);
}

// Remainder of a modulo a nonzero b.
inline Poly poly_mod(Poly a, Poly b, std::uint32_t p) {
  poly_trim(a);
  poly_trim(b);
  const std::uint32_t lead_inv = inv_mod_prime(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t f = std::uint64_t(a.back()) * lead_inv % p;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t k = 0; k < b.size(); ++k) {
      const std::uint64_t sub = f * b[k] % p;
      a[shift + k] = static_cast<std::uint32_t>((a[shift + k] + p - sub) % p);
    }
    poly_trim(a);
  }
  return a;
}

inline bool poly_irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t d = f.size() - 1;
  for (std::size_t k = 1; k <= d / 2; ++k) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < k; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly g(k + 1, 0);
      g[k] = 1;
      std::uint64_t rest = idx;
      for (std::size_t i = 0; i < k; ++i) {
        g[i] = static_cast<std::uint32_t>(rest % p);
        rest /= p;
      }
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

/// An explicit finite field with a fixed primitive element and discrete-log
/// tables. Immutable after construction; obtain instances through make().
class FqField {
 public:
  static constexpr std::uint32_t kMaxOrder = 1u << 16;

  /// Returns the (cached, hence pointer-identical) field of order p^d.
  static FieldPtr make(std::uint32_t p, std::uint32_t d) {
    if (!detail::is_prime(p)) throw DomainError("characteristic " + std::to_string(p) + " is not prime");
    if (d == 0) throw DomainError("field degree must be positive");
    std::uint64_t q = 1;
    for (std::uint32_t k = 0; k < d; ++k) {
      q *= p;
      if (q > kMaxOrder) throw DomainError("field order exceeds the 2^16 budget");
    }
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, FieldPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, d}];
    if (!slot) slot = FieldPtr(new FqField(p, d, static_cast<std::uint32_t>(q)));
    return slot;
  }

  std::uint32_t characteristic() const noexcept { return p_; }
  std::uint32_t degree() const noexcept { return d_; }
  std::uint32_t order() const noexcept { return q_; }
  /// q - 1, the order of the cyclic unit group.
  std::uint32_t unit_order() const noexcept { return q_ - 1; }
  /// d + 1 coefficients of the monic modulus, constant term first.
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  std::uint32_t generator_code() const noexcept { return exp_.size() > 1 ? exp_[1] : 1; }
  std::uint32_t minus_one_code() const noexcept { return p_ == 2 ? 1 : p_ - 1; }

  std::vector<std::uint32_t> coefficients(std::uint32_t code) const {
    std::vector<std::uint32_t> c(d_);
    for (auto& x : c) {
      x = code % p_;
      code /= p_;
    }
    return c;
  }

  std::uint32_t from_coefficients(const std::vector<std::uint32_t>& c) const {
    if (c.size() != d_) throw DomainError("coefficient vector has wrong length");
    std::uint32_t code = 0;
    for (std::size_t k = d_; k-- > 0;) {
      if (c[k] >= p_) throw DomainError("coefficient not reduced");
      code = code * p_ + c[k];
    }
    return code;
  }

  /// Image of an integer in the prime field.
  std::uint32_t from_integer(std::int64_t n) const {
    const std::int64_t r = ((n % std::int64_t(p_)) + p_) % p_;
    return static_cast<std::uint32_t>(r);
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t k = 0; k < d_; ++k) {
      out += ((a % p_ + b % p_) % p_) * scale;
      a /= p_;
      b /= p_;
      scale *= p_;
    }
    return out;
  }

  std::uint32_t neg(std::uint32_t a) const {
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t k = 0; k < d_; ++k) {
      out += ((p_ - a % p_) % p_) * scale;
      a /= p_;
      scale *= p_;
    }
    return out;
  }

  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % unit_order()];
  }

  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw DomainError("zero has no inverse");
    return exp_[(unit_order() - log_[a]) % unit_order()];
  }

  std::uint32_t pow(std::uint32_t a, const Int& e) const {
    if (a == 0) {
      if (e < 0) throw DomainError("zero has no inverse");
      return e == 0 ? 1 : 0;
    }
    return exp_[mod_u64(Int(log_[a]) * e, unit_order())];
  }

  /// g^k for the fixed generator g; k is reduced mod q - 1.
  std::uint32_t exp(const Int& k) const { return exp_[mod_u64(k, unit_order())]; }
  std::uint32_t exp(std::uint64_t k) const { return exp_[k % unit_order()]; }

  std::uint32_t dlog(std::uint32_t a) const {
    if (a == 0 || a >= q_) throw DomainError("discrete log of zero");
    return log_[a];
  }

  bool is_square(std::uint32_t a) const {
    if (a == 0) throw DomainError("is_square of zero");
    return p_ == 2 || log_[a] % 2 == 0;
  }

  FqElem element(std::uint32_t code) const;
  FqElem zero() const;
  FqElem one() const;
  FqElem generator() const;
  FqElem minus_one() const;

 private:
  FqField(std::uint32_t p, std::uint32_t d, std::uint32_t q) : p_(p), d_(d), q_(q) {
    choose_modulus();
    choose_generator_and_tables();
  }

  // Lexicographic rank of a code with c_0 as the most significant digit.
  std::vector<std::uint32_t> lex_digits(std::uint64_t key) const {
    std::vector<std::uint32_t> c(d_);
    for (std::size_t k = d_; k-- > 0;) {
      c[k] = static_cast<std::uint32_t>(key % p_);
      key /= p_;
    }
    return c;
  }

  void choose_modulus() {
    for (std::uint64_t key = 0; key < q_; ++key) {
      detail::Poly f = lex_digits(key);
      f.push_back(1);
      if (detail::poly_irreducible(f, p_)) {
        modulus_ = f;
        return;
      }
    }
    throw DomainError("no irreducible polynomial found");  // unreachable
  }

  detail::Poly poly_of(std::uint32_t code) const { return coefficients(code); }

  std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const {
    const auto x = poly_of(a), y = poly_of(b);
    detail::Poly prod(2 * d_, 0);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j)
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t(x[i]) * y[j]) % p_);
    auto r = detail::poly_mod(prod, modulus_, p_);
    r.resize(d_, 0);
    return from_coefficients(r);
  }

  std::uint32_t slow_pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t r = 1;
    while (e) {
      if (e & 1u) r = slow_mul(r, a);
      a = slow_mul(a, a);
      e >>= 1u;
    }
    return r;
  }

  void choose_generator_and_tables() {
    const std::uint32_t n = unit_order();
    const auto primes = detail::prime_factors(n);
    std::uint32_t g = 0;
    for (std::uint64_t key = 0; key < q_ && g == 0; ++key) {
      const std::uint32_t cand = from_coefficients(lex_digits(key));
      if (cand == 0) continue;
      bool primitive = true;
      for (auto r : primes)
        if (slow_pow(cand, n / r) == 1) primitive = false;
      if (primitive) g = cand;
    }
    exp_.assign(n, 0);
    log_.assign(q_, 0);
    std::uint32_t x = 1;
    for (std::uint32_t k = 0; k < n; ++k) {
      exp_[k] = x;
      log_[x] = k;
      x = slow_mul(x, g);
    }
  }

  std::uint32_t p_, d_, q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

/// A field element together with its owning field.
class FqElem {
 public:
  FqElem(FieldPtr field, std::uint32_t code) : field_(std::move(field)), code_(code) {
    if (!field_ || code_ >= field_->order()) throw DomainError("invalid field element");
  }

  const FieldPtr& field() const noexcept { return field_; }
  std::uint32_t code() const noexcept { return code_; }
  bool is_zero() const noexcept { return code_ == 0; }
  std::vector<std::uint32_t> coefficients() const { return field_->coefficients(code_); }

  std::uint32_t dlog() const { return field_->dlog(code_); }
  bool is_square() const { return field_->is_square(code_); }

  FqElem inverse() const { return {field_, field_->inv(code_)}; }
  FqElem pow(const Int& e) const { return {field_, field_->pow(code_, e)}; }

  friend FqElem operator+(const FqElem& a, const FqElem& b) {
    check_same(a, b);
    return {a.field_, a.field_->add(a.code_, b.code_)};
  }
  friend FqElem operator-(const FqElem& a, const FqElem& b) {
    check_same(a, b);
    return {a.field_, a.field_->sub(a.code_, b.code_)};
  }
  friend FqElem operator*(const FqElem& a, const FqElem& b) {
    check_same(a, b);
    return {a.field_, a.field_->mul(a.code_, b.code_)};
  }
  friend FqElem operator/(const FqElem& a, const FqElem& b) {
    check_same(a, b);
    return {a.field_, a.field_->mul(a.code_, a.field_->inv(b.code_))};
  }
  FqElem operator-() const { return {field_, field_->neg(code_)}; }

  friend bool operator==(const FqElem& a, const FqElem& b) {
    return a.field_ == b.field_ && a.code_ == b.code_;
  }

 private:
  static void check_same(const FqElem& a, const FqElem& b) {
    if (a.field_ != b.field_) throw DomainError("operands belong to different fields");
  }

  FieldPtr field_;
  std::uint32_t code_;
};

inline FqElem FqField::element(std::uint32_t code) const { return {make(p_, d_), code}; }
inline FqElem FqField::zero() const { return element(0); }
inline FqElem FqField::one() const { return element(1); }
inline FqElem FqField::generator() const { return element(generator_code()); }
inline FqElem FqField::minus_one() const { return element(minus_one_code()); }

inline FieldPtr make_field(std::uint32_t p, std::uint32_t d = 1) { return FqField::make(p, d); }

}  // namespace milnor

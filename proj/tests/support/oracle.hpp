#pragma once

// Independent reference computations used to check the library: schoolbook
// arithmetic on integers and coefficient vectors, with no shared code.

#include <cstdint>
#include <vector>

namespace oracle {

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  for (std::uint64_t k = 0; k < e; ++k) r = r * a % p;
  return r;
}

/// Multiplicative order of a mod p by repeated multiplication.
inline std::uint64_t order_mod(std::uint64_t a, std::uint64_t p) {
  std::uint64_t x = a % p, k = 1;
  while (x != 1) {
    x = x * a % p;
    ++k;
  }
  return k;
}

inline std::uint64_t smallest_primitive_root(std::uint64_t p) {
  for (std::uint64_t a = 1; a < p; ++a)
    if (order_mod(a, p) == p - 1) return a;
  return 0;
}

/// Polynomials over F_p as coefficient vectors, constant term first.
using Poly = std::vector<std::uint64_t>;

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  const std::size_t d = m.size() - 1;
  std::vector<std::uint64_t> r(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  // m is monic
  for (std::size_t k = r.size(); k-- > d;) {
    const auto c = r[k];
    if (!c) continue;
    for (std::size_t j = 0; j <= d; ++j) r[k - d + j] = (r[k - d + j] + (p - c) * m[j] % p) % p;
  }
  r.resize(d);
  return r;
}

/// Evaluates a monic polynomial with the given lower coefficients at x in F_p.
inline std::uint64_t eval_monic(const Poly& lower, std::uint64_t x, std::uint64_t p) {
  std::uint64_t r = 1;
  for (std::size_t k = lower.size(); k-- > 0;) r = (r * x + lower[k]) % p;
  return r;
}

}  // namespace oracle

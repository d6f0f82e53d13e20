#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace milnor {

/// Arbitrary-precision signed integer used for exponents and chain coefficients.
using Int = boost::multiprecision::cpp_int;

/// Least non-negative residue of a modulo m (m > 0).
inline Int mod_floor(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

inline std::uint64_t mod_u64(const Int& a, std::uint64_t m) {
  return static_cast<std::uint64_t>(mod_floor(a, Int(m)));
}

inline std::string to_string(const Int& a) { return a.str(); }

inline Int int_pow(Int base, unsigned exp) {
  Int r = 1;
  while (exp) {
    if (exp & 1u) r *= base;
    base *= base;
    exp >>= 1u;
  }
  return r;
}

inline Int factorial(unsigned n) {
  Int r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

inline Int binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

}  // namespace milnor

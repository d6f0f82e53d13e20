#pragma once

// Deterministic generators for property checks.
//
// The PRNG is xoshiro256** seeded through splitmix64, so a (seed, stream,
// case) triple names the same pseudo-random case in every build.

#include <array>
#include <cstdint>
#include <optional>

#include "milnor/presentation.hpp"

namespace milnor {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** 1.0.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed = 0) {
    for (auto& w : s_) w = splitmix64(seed);
  }

  /// Independent generator for one case of one law.
  static Xoshiro256 for_case(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t mix = seed;
    const std::uint64_t a = splitmix64(mix) ^ (stream * 0xd1b54a32d192ed03ULL);
    mix = a;
    const std::uint64_t b = splitmix64(mix) ^ (index * 0x8cb92ba72f3d8dd7ULL);
    return Xoshiro256(b);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, n), n > 0, without modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return x % n;
  }

  /// Uniform in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool coin() { return next() >> 63; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

/// Size limits for random units. Small roots pools keep the number of places
/// (and so the size of normal forms) bounded.
struct UnitShape {
  std::size_t max_factors = 2;
  int max_exp = 2;
  std::uint32_t root_pool = 3;
  /// Only variables with index >= first_var are used.
  std::size_t first_var = 0;
};

inline std::uint32_t random_root(const TowerField& t, Xoshiro256& rng, std::uint32_t pool) {
  const auto& f = *t.base();
  const std::uint32_t n = std::min<std::uint32_t>(pool, f.order());
  const auto k = static_cast<std::uint32_t>(rng.below(n));
  return k == 0 ? 0 : f.exp(std::uint64_t(k - 1));
}

inline UnitElem random_constant(const TowerPtr& t, Xoshiro256& rng) {
  return UnitElem::from_dlog(t, Int(rng.below(t->base()->unit_order())));
}

inline UnitElem random_unit(const TowerPtr& t, Xoshiro256& rng, const UnitShape& shape = {}) {
  UnitElem u = random_constant(t, rng);
  if (t->num_vars() <= shape.first_var) return u;
  const auto nvars = t->num_vars() - shape.first_var;
  const auto nf = rng.below(shape.max_factors + 1);
  for (std::size_t k = 0; k < nf; ++k) {
    const auto var = shape.first_var + rng.below(nvars);
    std::int64_t e = 0;
    while (e == 0) e = rng.range(-shape.max_exp, shape.max_exp);
    u = u * UnitElem::linear(t, var, random_root(*t, rng, shape.root_pool)).pow(Int(e));
  }
  return u;
}

/// A unit u != 1 for which 1 - u is again in G.
inline UnitElem random_steinberg_unit(const TowerPtr& t, Xoshiro256& rng, const UnitShape& shape = {}) {
  const auto& f = *t->base();
  if (f.order() == 2 && t->num_vars() <= shape.first_var)
    throw DomainError("F_2 has no unit u != 1 with 1 - u a unit");
  for (;;) {
    UnitElem c = random_constant(t, rng);
    const bool has_vars = t->num_vars() > shape.first_var;
    const auto kind = has_vars ? rng.below(4) : 0;
    UnitElem u = c;
    if (kind > 0) {
      const auto var = shape.first_var + rng.below(t->num_vars() - shape.first_var);
      const auto a = random_root(*t, rng, shape.root_pool);
      const auto lin = UnitElem::linear(t, var, a);
      if (kind == 1) u = c * lin;
      if (kind == 2) u = c / lin;
      if (kind == 3) {
        const auto b = random_root(*t, rng, shape.root_pool);
        if (b == a) continue;
        u = c * lin / UnitElem::linear(t, var, b);
      }
    }
    if (u.is_one()) continue;
    if (u.is_constant() && f.order() == 2) continue;
    if (one_minus(u)) return u;
  }
}

inline Symbol random_symbol(const TowerPtr& t, std::size_t degree, Xoshiro256& rng, const UnitShape& shape = {}) {
  std::vector<UnitElem> e;
  e.reserve(degree);
  for (std::size_t k = 0; k < degree; ++k) e.push_back(random_unit(t, rng, shape));
  return Symbol(std::move(e));
}

inline Int random_coeff(Xoshiro256& rng, int max_abs = 2) {
  std::int64_t c = 0;
  while (c == 0) c = rng.range(-max_abs, max_abs);
  return c;
}

inline Presentation random_presentation(const TowerPtr& t, std::size_t degree, std::size_t terms, Xoshiro256& rng,
                                        const UnitShape& shape = {}, int max_coeff = 2) {
  Presentation p(t, degree);
  for (std::size_t k = 0; k < terms; ++k) p.push(random_coeff(rng, max_coeff), random_symbol(t, degree, rng, shape));
  return p;
}

inline KChain random_chain(const TowerPtr& t, std::size_t degree, std::size_t terms, Xoshiro256& rng,
                           const UnitShape& shape = {}, int max_coeff = 2) {
  return random_presentation(t, degree, terms, rng, shape, max_coeff).chain();
}

}  // namespace milnor

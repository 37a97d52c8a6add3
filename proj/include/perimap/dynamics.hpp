#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perimap/error.hpp"
#include "perimap/ffield.hpp"
#include "perimap/numtheory.hpp"
#include "perimap/parallel.hpp"
#include "perimap/polynomial.hpp"

namespace perimap {

enum class Family { PrimePower, PMinusOnePower, RawExponent };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::PrimePower: return "pl";
    case Family::PMinusOnePower: return "pm1l";
    case Family::RawExponent: return "raw";
  }
  return "?";
}

/// Configured ceilings for exhaustive work. Exceeding one is an error, never a
/// silent truncation.
struct Limits {
  std::uint64_t max_q = 10'000'000;        // field elements enumerated per census
  std::uint64_t max_poly_degree = 4096;    // degree of an iterate polynomial
};

/// One member z -> z^d + c of a family: d = p^ell, (p-1)^ell, or an explicit d.
struct MapSpec {
  Family family = Family::PrimePower;
  std::uint64_t p = 3;
  std::uint64_t ell = 1;     // unused for RawExponent
  std::uint64_t d_raw = 0;   // RawExponent only
  BigInt c = 0;

  static MapSpec prime_power(std::uint64_t p, std::uint64_t ell, BigInt c) {
    return MapSpec{Family::PrimePower, p, ell, 0, std::move(c)};
  }
  static MapSpec p_minus_one_power(std::uint64_t p, std::uint64_t ell, BigInt c) {
    return MapSpec{Family::PMinusOnePower, p, ell, 0, std::move(c)};
  }
  static MapSpec raw(std::uint64_t p, std::uint64_t d, BigInt c) {
    return MapSpec{Family::RawExponent, p, 1, d, std::move(c)};
  }

  std::uint64_t c_mod_p() const { return reduce_mod(c, p); }

  ExpSpec exponent() const {
    switch (family) {
      case Family::PrimePower: return {p, ell};
      case Family::PMinusOnePower: return {p - 1, ell};
      case Family::RawExponent: return {d_raw, 1};
    }
    return {};
  }

  /// The literal degree d, or nullopt if it does not fit in 64 bits.
  std::optional<std::uint64_t> degree() const {
    const ExpSpec e = exponent();
    return checked_pow(e.radix, static_cast<unsigned>(e.power));
  }

  void validate() const {
    if (!is_prime(p)) throw Error(ErrorKind::NonPrime, "p must be prime (got " + std::to_string(p) + ")");
    switch (family) {
      case Family::PrimePower:
        if (p < 3) throw Error(ErrorKind::PrimeTooSmall, "family pl requires p >= 3");
        if (ell < 1) throw Error(ErrorKind::InvalidMap, "ell must be >= 1");
        break;
      case Family::PMinusOnePower:
        if (p < 5) throw Error(ErrorKind::PrimeTooSmall, "family pm1l requires p >= 5");
        if (ell < 1) throw Error(ErrorKind::InvalidMap, "ell must be >= 1");
        break;
      case Family::RawExponent:
        if (d_raw < 2) throw Error(ErrorKind::InvalidMap, "raw exponent must be >= 2");
        break;
    }
  }
};

inline void check_compatible(const FieldCtx& ctx, const MapSpec& m) {
  m.validate();
  if (m.p != ctx.p()) {
    throw Error(ErrorKind::ContextMismatch,
                "map is over p = " + std::to_string(m.p) + " but field has p = " + std::to_string(ctx.p()));
  }
}

/// Six census counts: {fixed, period dividing 2, exact period 2} x
/// {whole field, prime subfield}.
struct CensusResult {
  std::uint64_t q = 0;
  std::uint64_t fixed_full = 0;
  std::uint64_t div2_full = 0;
  std::uint64_t exact2_full = 0;
  std::uint64_t fixed_sub = 0;
  std::uint64_t div2_sub = 0;
  std::uint64_t exact2_sub = 0;

  bool operator==(const CensusResult&) const = default;
};

/// Points of the functional graph grouped by exact period; strictly
/// preperiodic points are counted separately so the totals always reach q.
struct OrbitCensus {
  std::map<std::uint64_t, std::uint64_t> period_points;  // period -> #points
  std::uint64_t tail_point_count = 0;

  std::uint64_t points_of_period(std::uint64_t m) const {
    auto it = period_points.find(m);
    return it == period_points.end() ? 0 : it->second;
  }
  std::uint64_t cycles_of_length(std::uint64_t m) const { return points_of_period(m) / m; }
  std::uint64_t periodic_points() const {
    std::uint64_t s = 0;
    for (const auto& [m, k] : period_points) s += k;
    return s;
  }

  bool operator==(const OrbitCensus&) const = default;
};

inline FieldElem eval_map(const FieldCtx& ctx, const MapSpec& m, const FieldElem& z) {
  check_compatible(ctx, m);
  ctx.check(z);
  FieldElem w = ctx.pow_reduced(z, m.exponent());
  w.coeffs[0] = addmod(w.coeffs[0], m.c_mod_p(), ctx.p());
  return w;
}

inline void check_enumeration_limit(const FieldCtx& ctx, const Limits& limits) {
  if (ctx.q() > limits.max_q) {
    throw Error(ErrorKind::EnumerationLimitExceeded, "field size q = " + std::to_string(ctx.q()) +
                                                         " exceeds enumeration limit " +
                                                         std::to_string(limits.max_q));
  }
}

/// powers[i] = index of z^e for element i; shared by every coefficient c.
inline std::vector<std::uint64_t> power_table(const FieldCtx& ctx, const ExpSpec& exponent, unsigned threads = 1) {
  const std::uint64_t q = ctx.q();
  const std::uint64_t e = ctx.reduced_exponent(exponent);
  std::vector<std::uint64_t> powers(q);
  parallel_chunks(q, threads, [&](std::uint64_t begin, std::uint64_t end, unsigned) {
    for (std::uint64_t i = begin; i < end; ++i) {
      powers[i] = i == 0 ? 0 : ctx.index_of(ctx.pow(ctx.from_index(i), e));
    }
  });
  return powers;
}

/// Adds the constant c (in [0, p)) to every entry of a power table. Only the
/// lowest base-p digit of an index changes.
inline std::vector<std::uint64_t> shift_table(const FieldCtx& ctx, const std::vector<std::uint64_t>& powers,
                                              std::uint64_t c) {
  const std::uint64_t p = ctx.p();
  std::vector<std::uint64_t> image(powers.size());
  for (std::size_t i = 0; i < powers.size(); ++i) {
    const std::uint64_t low = powers[i] % p;
    image[i] = powers[i] - low + addmod(low, c, p);
  }
  return image;
}

/// image[i] = index of phi(element i), for every element of the field.
inline std::vector<std::uint64_t> map_table(const FieldCtx& ctx, const MapSpec& m, const Limits& limits = {},
                                            unsigned threads = 1) {
  check_compatible(ctx, m);
  check_enumeration_limit(ctx, limits);
  return shift_table(ctx, power_table(ctx, m.exponent(), threads), m.c_mod_p());
}

/// Tallies the six census counts from a map table over ctx.
inline CensusResult census_from_table(const FieldCtx& ctx, const std::vector<std::uint64_t>& image,
                                      unsigned threads = 1) {
  const std::uint64_t q = ctx.q();
  if (image.size() != q) throw Error(ErrorKind::ContextMismatch, "map table size differs from field size");
  const std::uint64_t p = ctx.p();
  std::vector<CensusResult> partial(std::max(1U, threads));
  parallel_chunks(q, threads, [&](std::uint64_t begin, std::uint64_t end, unsigned worker) {
    CensusResult& r = partial[worker];
    for (std::uint64_t z = begin; z < end; ++z) {
      const std::uint64_t w = image[z];
      const bool fixed = w == z;
      const bool div2 = image[w] == z;
      r.fixed_full += fixed;
      r.div2_full += div2;
      r.exact2_full += div2 && !fixed;
      if (z < p) {
        r.fixed_sub += fixed;
        r.div2_sub += div2;
        r.exact2_sub += div2 && !fixed;
      }
    }
  });
  CensusResult total;
  total.q = q;
  for (const auto& r : partial) {
    total.fixed_full += r.fixed_full;
    total.div2_full += r.div2_full;
    total.exact2_full += r.exact2_full;
    total.fixed_sub += r.fixed_sub;
    total.div2_sub += r.div2_sub;
    total.exact2_sub += r.exact2_sub;
  }
  return total;
}

/// Exhaustive census of fixed / period-dividing-2 / exact-period-2 points.
inline CensusResult census(const FieldCtx& ctx, const MapSpec& m, const Limits& limits = {},
                           unsigned threads = 1) {
  return census_from_table(ctx, map_table(ctx, m, limits, threads), threads);
}

/// Decomposes the functional graph of a map table into cycles and tails.
inline OrbitCensus orbit_census_from_table(const std::vector<std::uint64_t>& image) {
  const std::uint64_t q = image.size();
  // 0 = unvisited, 1 = on the current walk, 2 = finished.
  std::vector<std::uint8_t> state(q, 0);
  std::vector<std::uint64_t> period(q, 0);
  std::vector<std::uint64_t> walk;
  OrbitCensus out;
  for (std::uint64_t start = 0; start < q; ++start) {
    if (state[start] != 0) continue;
    walk.clear();
    std::uint64_t z = start;
    while (state[z] == 0) {
      state[z] = 1;
      walk.push_back(z);
      z = image[z];
    }
    if (state[z] == 1) {
      // z closes a new cycle; everything on the walk before it is tail.
      std::size_t pos = walk.size();
      while (walk[pos - 1] != z) --pos;
      --pos;
      const std::uint64_t len = walk.size() - pos;
      for (std::size_t i = pos; i < walk.size(); ++i) period[walk[i]] = len;
      out.period_points[len] += len;
      out.tail_point_count += pos;
    } else {
      out.tail_point_count += walk.size();
    }
    for (auto v : walk) state[v] = 2;
  }
  return out;
}

inline OrbitCensus orbit_census(const FieldCtx& ctx, const MapSpec& m, const Limits& limits = {},
                                unsigned threads = 1) {
  return orbit_census_from_table(map_table(ctx, m, limits, threads));
}

// --- root counting through polynomial gcds ------------------------------------

enum class IteratePoly { PhiMinusId, Phi2MinusId };

/// phi(x) - x or phi(phi(x)) - x over F_p, expanded with Pascal's rule mod p.
inline FpPoly iterate_polynomial(const MapSpec& m, IteratePoly which, const Limits& limits = {}) {
  m.validate();
  const std::uint64_t p = m.p;
  const std::uint64_t c = m.c_mod_p();
  const auto d = m.degree();
  const auto too_big = [&](const std::string& what) {
    return Error(ErrorKind::DegreeLimitExceeded,
                 what + " exceeds polynomial degree limit " + std::to_string(limits.max_poly_degree));
  };
  if (!d || *d > limits.max_poly_degree) throw too_big("map degree");

  if (which == IteratePoly::PhiMinusId) {
    FpPoly f = FpPoly::monomial(p, *d);
    return sub(add(f, FpPoly::constant(p, c)), FpPoly::x(p));
  }

  std::uint64_t total = 0;
  if (__builtin_mul_overflow(*d, *d, &total) || total > limits.max_poly_degree) {
    throw too_big("degree of phi^2(x) - x");
  }
  // Row d of Pascal's triangle mod p.
  std::vector<std::uint64_t> row{1};
  for (std::uint64_t k = 1; k <= *d; ++k) {
    std::vector<std::uint64_t> next(k + 1, 1);
    for (std::uint64_t j = 1; j < k; ++j) next[j] = addmod(row[j - 1], row[j], p);
    row = std::move(next);
  }
  // (x^d + c)^d = sum_k C(d,k) c^(d-k) x^(dk)
  std::vector<std::uint64_t> coeffs(total + 1, 0);
  for (std::uint64_t k = 0; k <= *d; ++k) {
    if (row[k] == 0) continue;
    coeffs[*d * k] = mulmod(row[k], powmod(c, *d - k, p), p);
  }
  coeffs[0] = addmod(coeffs[0], c, p);
  coeffs[1] = submod(coeffs[1], 1, p);
  return FpPoly(p, std::move(coeffs));
}

/// Number of distinct roots of f in F_{p^n}: deg gcd(x^(p^n) - x, f).
inline std::uint64_t count_distinct_roots(const FpPoly& f, unsigned n, const Limits& limits = {}) {
  if (f.is_zero()) throw Error(ErrorKind::InvalidArgument, "root count of the zero polynomial");
  if (static_cast<std::uint64_t>(f.degree()) > limits.max_poly_degree) {
    throw Error(ErrorKind::DegreeLimitExceeded, "polynomial degree " + std::to_string(f.degree()) +
                                                    " exceeds limit " + std::to_string(limits.max_poly_degree));
  }
  if (f.degree() == 0) return 0;
  const std::uint64_t p = f.modulus();
  const auto q = checked_pow(p, n);
  const FpPoly x = FpPoly::x(p);

  if (q && *q < static_cast<std::uint64_t>(f.degree())) {
    // x^q - x is the sparser side: fold f with x^k = x^(((k-1) mod (q-1)) + 1).
    std::vector<std::uint64_t> folded(*q, 0);
    const auto& fc = f.coeffs();
    folded[0] = fc[0];
    for (std::size_t k = 1; k < fc.size(); ++k) {
      const std::size_t slot = ((k - 1) % (*q - 1)) + 1;
      folded[slot] = addmod(folded[slot], fc[k], p);
    }
    const FpPoly field_poly = sub(FpPoly::monomial(p, *q), x);
    return static_cast<std::uint64_t>(gcd(field_poly, FpPoly(p, std::move(folded))).degree());
  }
  const FpPoly h = sub(frobenius_x(f, n), x);
  return static_cast<std::uint64_t>(gcd(f, h).degree());
}

/// Distinct roots of phi(x) - x or phi^2(x) - x in F_{p^n}, independent of
/// enumeration. Equals fixed_full / div2_full of the census.
inline std::uint64_t count_roots_gcd(const FieldCtx& ctx, const MapSpec& m, IteratePoly which,
                                     const Limits& limits = {}) {
  check_compatible(ctx, m);
  return count_distinct_roots(iterate_polynomial(m, which, limits), ctx.n(), limits);
}

inline bool has_root_in_extension(const FpPoly& f, unsigned n, const Limits& limits = {}) {
  if (!is_prime(f.modulus())) throw Error(ErrorKind::NonPrime, "p must be prime");
  if (n < 1) throw Error(ErrorKind::DegreeTooSmall, "extension degree must be >= 1");
  return count_distinct_roots(f, n, limits) >= 1;
}

inline bool has_root_in_extension(std::uint64_t p, const std::vector<std::uint64_t>& f, unsigned n,
                                  const Limits& limits = {}) {
  return has_root_in_extension(FpPoly(p, f), n, limits);
}

}  // namespace perimap

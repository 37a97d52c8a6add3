#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "perimap/error.hpp"
#include "perimap/numtheory.hpp"
#include "perimap/polynomial.hpp"

namespace perimap {

/// Element of F_{p^n}: n residues in [0, p), coefficients of a polynomial in
/// the generator, constant term first. Always stored fully reduced, so
/// equality is plain vector equality.
struct FieldElem {
  std::vector<std::uint64_t> coeffs;

  bool operator==(const FieldElem&) const = default;
};

/// Exponent radix^power, kept symbolic so that p^l and (p-1)^l never have to
/// be materialized.
struct ExpSpec {
  std::uint64_t radix = 1;
  std::uint64_t power = 0;
};

/// Is f irreducible over F_p? Rabin's distinct-degree criterion:
/// x^(p^d) = x mod f and gcd(x^(p^(d/r)) - x, f) = 1 for every prime r | d.
inline bool is_irreducible(const FpPoly& f) {
  if (!f.is_monic()) throw Error(ErrorKind::NotMonic, "is_irreducible: polynomial must be monic");
  const long d = f.degree();
  if (d < 1) throw Error(ErrorKind::DegreeTooSmall, "is_irreducible: degree must be >= 1");
  if (d == 1) return true;
  const std::uint64_t p = f.modulus();
  const FpPoly x = FpPoly::x(p);

  // frob[k] = x^(p^k) mod f for k = 0..d.
  std::vector<FpPoly> frob;
  frob.reserve(static_cast<std::size_t>(d) + 1);
  frob.push_back(rem(x, f));
  for (long k = 1; k <= d; ++k) frob.push_back(powmod(frob.back(), p, f));

  if (frob[static_cast<std::size_t>(d)] != rem(x, f)) return false;
  for (std::uint64_t r : prime_divisors(static_cast<std::uint64_t>(d))) {
    const FpPoly g = gcd(f, sub(frob[static_cast<std::size_t>(d) / r], x));
    if (g.degree() != 0) return false;
  }
  return true;
}

inline bool is_irreducible(std::uint64_t p, const std::vector<std::uint64_t>& coeffs) {
  if (!is_prime(p)) throw Error(ErrorKind::NonPrime, "p = " + std::to_string(p) + " is not prime");
  return is_irreducible(FpPoly(p, coeffs));
}

/// Concrete model of F_{p^n} = F_p[x]/(modulus). Immutable once built, so a
/// single instance can be shared by any number of workers.
class FieldCtx {
 public:
  /// Validates p and the modulus (monic, irreducible) and that p^n fits 64 bits.
  FieldCtx(std::uint64_t p, FpPoly modulus) : p_(p), modulus_(std::move(modulus)) {
    if (!is_prime(p_)) throw Error(ErrorKind::NonPrime, "p = " + std::to_string(p_) + " is not prime");
    if (modulus_.modulus() != p_) throw Error(ErrorKind::ContextMismatch, "modulus is over a different prime");
    if (!modulus_.is_monic()) throw Error(ErrorKind::NotMonic, "field modulus must be monic");
    if (modulus_.degree() < 1) throw Error(ErrorKind::DegreeTooSmall, "field modulus must have degree >= 1");
    n_ = static_cast<unsigned>(modulus_.degree());
    auto q = checked_pow(p_, n_);
    if (!q) {
      throw Error(ErrorKind::Overflow,
                  "p^n overflows 64 bits for p = " + std::to_string(p_) + ", n = " + std::to_string(n_));
    }
    q_ = *q;
    if (!is_irreducible(modulus_)) throw Error(ErrorKind::InvalidArgument, "field modulus is reducible");
  }

  std::uint64_t p() const noexcept { return p_; }
  unsigned n() const noexcept { return n_; }
  std::uint64_t q() const noexcept { return q_; }
  const FpPoly& modulus() const noexcept { return modulus_; }

  bool operator==(const FieldCtx& other) const { return p_ == other.p_ && modulus_ == other.modulus_; }

  // --- element construction -------------------------------------------------

  FieldElem zero() const { return FieldElem{std::vector<std::uint64_t>(n_, 0)}; }
  FieldElem one() const { return constant(1); }

  FieldElem constant(std::uint64_t a) const {
    FieldElem e = zero();
    e.coeffs[0] = a % p_;
    return e;
  }

  /// Class of x in F_p[x]/(modulus).
  FieldElem generator() const {
    FieldElem e = zero();
    if (n_ == 1) {
      e.coeffs[0] = submod(0, modulus_[0], p_);  // x = -m0 mod (x + m0)
    } else {
      e.coeffs[1] = 1;
    }
    return e;
  }

  FieldElem element(std::vector<std::uint64_t> coeffs) const {
    FieldElem e{std::move(coeffs)};
    check(e);
    return e;
  }

  /// Elements are numbered by the base-p digits of their coefficients,
  /// constant term least significant; indices below p are the prime subfield.
  FieldElem from_index(std::uint64_t index) const {
    FieldElem e = zero();
    for (unsigned i = 0; i < n_; ++i) {
      e.coeffs[i] = index % p_;
      index /= p_;
    }
    return e;
  }

  std::uint64_t index_of(const FieldElem& e) const {
    std::uint64_t index = 0;
    for (unsigned i = n_; i-- > 0;) index = index * p_ + e.coeffs[i];
    return index;
  }

  bool is_zero(const FieldElem& e) const {
    for (auto c : e.coeffs) {
      if (c != 0) return false;
    }
    return true;
  }

  bool in_prime_subfield(const FieldElem& e) const {
    for (unsigned i = 1; i < n_; ++i) {
      if (e.coeffs[i] != 0) return false;
    }
    return true;
  }

  void check(const FieldElem& e) const {
    if (e.coeffs.size() != n_) {
      throw Error(ErrorKind::ContextMismatch, "element has " + std::to_string(e.coeffs.size()) +
                                                  " coefficients, field degree is " + std::to_string(n_));
    }
    for (auto c : e.coeffs) {
      if (c >= p_) throw Error(ErrorKind::ContextMismatch, "element coefficient out of range [0, p)");
    }
  }

  // --- arithmetic -----------------------------------------------------------

  FieldElem add(const FieldElem& a, const FieldElem& b) const {
    FieldElem r = zero();
    for (unsigned i = 0; i < n_; ++i) r.coeffs[i] = addmod(a.coeffs[i], b.coeffs[i], p_);
    return r;
  }

  FieldElem sub(const FieldElem& a, const FieldElem& b) const {
    FieldElem r = zero();
    for (unsigned i = 0; i < n_; ++i) r.coeffs[i] = submod(a.coeffs[i], b.coeffs[i], p_);
    return r;
  }

  FieldElem neg(const FieldElem& a) const { return sub(zero(), a); }

  FieldElem mul(const FieldElem& a, const FieldElem& b) const {
    if (n_ == 1) return FieldElem{{mulmod(a.coeffs[0], b.coeffs[0], p_)}};
    std::vector<std::uint64_t> prod;
    detail::mul_into(a.coeffs, b.coeffs, p_, prod);
    // Reduce by the monic modulus from the top down.
    const auto& m = modulus_.coeffs();
    for (std::size_t i = prod.size(); i-- > n_;) {
      const std::uint64_t t = prod[i];
      if (t == 0) continue;
      for (unsigned j = 0; j < n_; ++j) {
        if (m[j] != 0) prod[i - n_ + j] = submod(prod[i - n_ + j], mulmod(t, m[j], p_), p_);
      }
    }
    prod.resize(n_);
    return FieldElem{std::move(prod)};
  }

  FieldElem pow(FieldElem base, std::uint64_t exp) const {
    FieldElem result = one();
    while (exp != 0) {
      if (exp & 1U) result = mul(result, base);
      exp >>= 1U;
      if (exp != 0) base = mul(base, base);
    }
    return result;
  }

  /// Multiplicative inverse via a^(q-2).
  FieldElem inv(const FieldElem& a) const {
    if (is_zero(a)) throw Error(ErrorKind::ZeroInverse, "zero has no multiplicative inverse");
    return pow(a, q_ - 2);
  }

  /// Exponent radix^power reduced into [1, q-1] (Lagrange: a^(q-1) = 1 for a != 0).
  std::uint64_t reduced_exponent(const ExpSpec& e) const {
    const std::uint64_t order = q_ - 1;
    std::uint64_t r = order == 0 ? 0 : powmod(e.radix, e.power, order);
    return r == 0 ? order : r;
  }

  /// base^(radix^power) without big-integer exponents; 0 maps to 0.
  FieldElem pow_reduced(const FieldElem& base, const ExpSpec& e) const {
    if (is_zero(base)) return zero();
    return pow(base, reduced_exponent(e));
  }

 private:
  std::uint64_t p_;
  FpPoly modulus_;
  unsigned n_ = 1;
  std::uint64_t q_ = 0;
};

/// F_{p^n} with the smallest monic irreducible modulus, where candidates
/// x^n + c_{n-1}x^{n-1} + ... + c_0 are ordered by the integer
/// c_0 + c_1 p + ... + c_{n-1} p^{n-1} (so the highest coefficient is most
/// significant). Deterministic on every platform.
inline FieldCtx make_field(std::uint64_t p, unsigned n) {
  if (!is_prime(p)) throw Error(ErrorKind::NonPrime, "p must be prime (got " + std::to_string(p) + ")");
  if (n < 1) throw Error(ErrorKind::DegreeTooSmall, "n must be >= 1");
  if (!checked_pow(p, n)) {
    throw Error(ErrorKind::Overflow,
                "p^n overflows 64 bits for p = " + std::to_string(p) + ", n = " + std::to_string(n));
  }
  if (n == 1) return FieldCtx(p, FpPoly::x(p));

  std::vector<std::uint64_t> tail(n, 0);
  for (;;) {
    std::vector<std::uint64_t> c = tail;
    c.push_back(1);
    FpPoly f(p, std::move(c));
    if (f[0] != 0 && is_irreducible(f)) return FieldCtx(p, std::move(f));
    // Increment (c_0, ..., c_{n-1}) as a base-p number, c_0 least significant.
    unsigned i = 0;
    while (i < n && ++tail[i] == p) tail[i++] = 0;
    if (i == n) break;
  }
  throw Error(ErrorKind::InvalidArgument, "no irreducible polynomial found");  // unreachable
}

enum class FieldOp { Add, Sub, Mul, Neg, Inv };

/// Dispatcher over the ring operations; b is ignored for unary ops.
inline FieldElem field_arith(const FieldCtx& ctx, FieldOp op, const FieldElem& a, const FieldElem* b = nullptr) {
  ctx.check(a);
  const bool binary = op == FieldOp::Add || op == FieldOp::Sub || op == FieldOp::Mul;
  if (binary) {
    if (b == nullptr) throw Error(ErrorKind::InvalidArgument, "binary field operation needs two operands");
    ctx.check(*b);
  }
  switch (op) {
    case FieldOp::Add: return ctx.add(a, *b);
    case FieldOp::Sub: return ctx.sub(a, *b);
    case FieldOp::Mul: return ctx.mul(a, *b);
    case FieldOp::Neg: return ctx.neg(a);
    case FieldOp::Inv: return ctx.inv(a);
  }
  return a;
}

inline FieldElem pow_reduced(const FieldCtx& ctx, const FieldElem& base, const ExpSpec& e) {
  ctx.check(base);
  if (e.radix == 0) throw Error(ErrorKind::InvalidArgument, "exponent radix must be >= 1");
  return ctx.pow_reduced(base, e);
}

// --- integer polynomials and inertness ---------------------------------------

/// Polynomial with arbitrary-size integer coefficients, constant term first,
/// leading coefficient nonzero (the zero polynomial is empty).
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  const std::vector<BigInt>& coeffs() const noexcept { return c_; }
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  FpPoly reduce(std::uint64_t p) const {
    std::vector<std::uint64_t> r;
    r.reserve(c_.size());
    for (const auto& c : c_) r.push_back(reduce_mod(c, p));
    return FpPoly(p, std::move(r));
  }

 private:
  std::vector<BigInt> c_;
};

enum class InertVerdict { Inert, NotInert };

struct InertResult {
  InertVerdict verdict = InertVerdict::NotInert;
  // h mod p is inseparable (disc = 0 mod p): p may divide the index
  // [O_K : Z[theta]], in which case the factorization of h mod p says nothing
  // definitive about pO_K.
  bool index_warning = false;
};

inline const char* to_string(InertVerdict v) { return v == InertVerdict::Inert ? "Inert" : "NotInert"; }

/// Reads inertness of p in Z[x]/(h) off the factorization of h mod p.
inline InertResult inert_check(const IntPoly& h, std::uint64_t p) {
  if (!is_prime(p)) throw Error(ErrorKind::NonPrime, "p must be prime (got " + std::to_string(p) + ")");
  if (h.degree() < 2) throw Error(ErrorKind::DegreeTooSmall, "defining polynomial must have degree >= 2");
  if (!h.is_monic()) throw Error(ErrorKind::NotMonic, "defining polynomial must be monic");
  const FpPoly hp = h.reduce(p);
  InertResult out;
  out.verdict = is_irreducible(hp) ? InertVerdict::Inert : InertVerdict::NotInert;
  // Over F_p, disc(hp) = 0 iff hp has a repeated factor iff gcd(hp, hp') != 1.
  out.index_warning = gcd(hp, derivative(hp)).degree() != 0;
  return out;
}

}  // namespace perimap

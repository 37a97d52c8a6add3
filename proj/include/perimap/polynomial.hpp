#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "perimap/error.hpp"
#include "perimap/numtheory.hpp"

namespace perimap {

/// Dense univariate polynomial over F_p, constant term first.
///
/// The coefficient vector is always trimmed: the zero polynomial is empty and
/// every nonzero polynomial has a nonzero leading coefficient. All coefficients
/// lie in [0, p).
class FpPoly {
 public:
  FpPoly() = default;

  FpPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
    for (auto& a : c_) a %= p_;
    trim();
  }

  static FpPoly zero(std::uint64_t p) { return FpPoly(p, {}); }
  static FpPoly constant(std::uint64_t p, std::uint64_t a) { return FpPoly(p, {a}); }
  static FpPoly x(std::uint64_t p) { return FpPoly(p, {0, 1}); }

  static FpPoly monomial(std::uint64_t p, std::size_t degree, std::uint64_t a = 1) {
    std::vector<std::uint64_t> c(degree + 1, 0);
    c[degree] = a;
    return FpPoly(p, std::move(c));
  }

  std::uint64_t modulus() const noexcept { return p_; }
  const std::vector<std::uint64_t>& coeffs() const noexcept { return c_; }

  bool is_zero() const noexcept { return c_.empty(); }
  // -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  std::uint64_t leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
  bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }

  std::uint64_t operator[](std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }

  bool operator==(const FpPoly& other) const = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::uint64_t p_ = 2;
  std::vector<std::uint64_t> c_;

  friend FpPoly add(const FpPoly&, const FpPoly&);
  friend FpPoly sub(const FpPoly&, const FpPoly&);
  friend FpPoly mul(const FpPoly&, const FpPoly&);
  friend std::pair<FpPoly, FpPoly> divrem(const FpPoly&, const FpPoly&);
};

namespace detail {

inline std::uint64_t inverse_mod_prime(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw Error(ErrorKind::ZeroInverse, "zero has no inverse mod " + std::to_string(p));
  return powmod(a, p - 2, p);
}

// Schoolbook product of coefficient spans into out (size a.size()+b.size()-1).
inline void mul_into(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                     std::uint64_t p, std::vector<std::uint64_t>& out) {
  out.assign(a.size() + b.size() - 1, 0);
  if (p <= 0xFFFFFFFFULL) {
    // Products fit in 64 bits; accumulate in 128 bits and reduce once per slot.
    std::vector<unsigned __int128> acc(out.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += a[i] * b[j];
    }
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<std::uint64_t>(acc[k] % p);
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = addmod(out[i + j], mulmod(a[i], b[j], p), p);
    }
  }
}

}  // namespace detail

inline FpPoly add(const FpPoly& a, const FpPoly& b) {
  const std::uint64_t p = a.p_;
  std::vector<std::uint64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = addmod(a[i], b[i], p);
  return FpPoly(p, std::move(c));
}

inline FpPoly sub(const FpPoly& a, const FpPoly& b) {
  const std::uint64_t p = a.p_;
  std::vector<std::uint64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = submod(a[i], b[i], p);
  return FpPoly(p, std::move(c));
}

inline FpPoly mul(const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return FpPoly::zero(a.p_);
  std::vector<std::uint64_t> c;
  detail::mul_into(a.c_, b.c_, a.p_, c);
  return FpPoly(a.p_, std::move(c));
}

inline FpPoly scale(const FpPoly& a, std::uint64_t s) {
  std::vector<std::uint64_t> c = a.coeffs();
  for (auto& v : c) v = mulmod(v, s, a.modulus());
  return FpPoly(a.modulus(), std::move(c));
}

/// Quotient and remainder of a by a nonzero divisor b.
inline std::pair<FpPoly, FpPoly> divrem(const FpPoly& a, const FpPoly& b) {
  if (b.is_zero()) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
  const std::uint64_t p = a.p_;
  if (a.degree() < b.degree()) return {FpPoly::zero(p), a};
  std::vector<std::uint64_t> r = a.c_;
  const std::size_t m = b.c_.size() - 1;
  std::vector<std::uint64_t> q(r.size() - m, 0);
  const std::uint64_t lc_inv = b.is_monic() ? 1 : detail::inverse_mod_prime(b.leading(), p);
  for (std::size_t i = r.size(); i-- > m;) {
    if (r[i] == 0) continue;
    const std::uint64_t t = mulmod(r[i], lc_inv, p);
    q[i - m] = t;
    for (std::size_t j = 0; j <= m; ++j) {
      if (b.c_[j] != 0) r[i - m + j] = submod(r[i - m + j], mulmod(t, b.c_[j], p), p);
    }
  }
  r.resize(m);
  return {FpPoly(p, std::move(q)), FpPoly(p, std::move(r))};
}

inline FpPoly rem(const FpPoly& a, const FpPoly& b) { return divrem(a, b).second; }

inline FpPoly make_monic(const FpPoly& a) {
  if (a.is_zero() || a.is_monic()) return a;
  return scale(a, detail::inverse_mod_prime(a.leading(), a.modulus()));
}

/// Monic gcd; gcd(0, 0) is the zero polynomial.
inline FpPoly gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

inline FpPoly derivative(const FpPoly& a) {
  const std::uint64_t p = a.modulus();
  if (a.degree() < 1) return FpPoly::zero(p);
  std::vector<std::uint64_t> c(a.coeffs().size() - 1);
  for (std::size_t i = 1; i < a.coeffs().size(); ++i) c[i - 1] = mulmod(a.coeffs()[i], i % p, p);
  return FpPoly(p, std::move(c));
}

inline FpPoly mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& f) { return rem(mul(a, b), f); }

/// base^exp mod f by square and multiply.
inline FpPoly powmod(FpPoly base, std::uint64_t exp, const FpPoly& f) {
  FpPoly result = rem(FpPoly::constant(f.modulus(), 1), f);
  base = rem(base, f);
  while (exp != 0) {
    if (exp & 1U) result = mulmod(result, base, f);
    exp >>= 1U;
    if (exp != 0) base = mulmod(base, base, f);
  }
  return result;
}

/// x^(p^k) mod f, by k successive p-th powers of x.
inline FpPoly frobenius_x(const FpPoly& f, unsigned k) {
  FpPoly r = rem(FpPoly::x(f.modulus()), f);
  for (unsigned i = 0; i < k; ++i) r = powmod(r, f.modulus(), f);
  return r;
}

}  // namespace perimap

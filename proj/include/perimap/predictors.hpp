#pragma once

#include <cstdint>
#include <string>

#include "perimap/dynamics.hpp"
#include "perimap/error.hpp"
#include "perimap/numtheory.hpp"

namespace perimap {

/// Residue class of c mod p that selects a theorem branch.
enum class CoeffClass { Zero, PlusOne, MinusOne, Other };

inline const char* to_string(CoeffClass c) {
  switch (c) {
    case CoeffClass::Zero: return "zero";
    case CoeffClass::PlusOne: return "plus-one";
    case CoeffClass::MinusOne: return "minus-one";
    case CoeffClass::Other: return "other";
  }
  return "?";
}

inline CoeffClass classify_residue(std::uint64_t p, std::uint64_t r) {
  if (r == 0) return CoeffClass::Zero;
  if (r == 1) return CoeffClass::PlusOne;
  if (r == p - 1) return CoeffClass::MinusOne;
  return CoeffClass::Other;
}

inline CoeffClass classify_coeff(std::uint64_t p, const BigInt& c) {
  if (p < 3) throw Error(ErrorKind::PrimeTooSmall, "coefficient classes need p >= 3");
  return classify_residue(p, reduce_mod(c, p));
}

/// A claimed count: an exact value, or the closed interval [lo, hi].
struct PredictedCount {
  enum class Kind { Exact, Interval };

  Kind kind = Kind::Exact;
  std::uint64_t lo = 0;  // the exact value when kind == Exact
  std::uint64_t hi = 0;
  std::string source;
  std::string convention_note;

  static PredictedCount exact(std::uint64_t k, std::string source, std::string note) {
    return {Kind::Exact, k, k, std::move(source), std::move(note)};
  }
  static PredictedCount interval(std::uint64_t lo, std::uint64_t hi, std::string source, std::string note) {
    return {Kind::Interval, lo, hi, std::move(source), std::move(note)};
  }

  bool is_exact() const noexcept { return kind == Kind::Exact; }
  std::uint64_t value() const noexcept { return lo; }
  bool admits(std::uint64_t observed) const noexcept { return lo <= observed && observed <= hi; }

  std::string render() const {
    if (is_exact()) return std::to_string(lo);
    return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
  }

  bool operator==(const PredictedCount&) const = default;
};

namespace detail {
inline constexpr const char* kTwoPeriodicNote =
    "claimed count of 2-periodic points; the proof counts roots of phi^2(z) - z";
inline constexpr const char* kFixedNote = "claimed count of fixed points (cited prior result)";
}  // namespace detail

/// Claimed 2-periodic count for z^(p^ell) + c. Never depends on the field degree.
inline PredictedCount predict_N(std::uint64_t p, std::uint64_t ell, CoeffClass cls) {
  if (p < 3) throw Error(ErrorKind::PrimeTooSmall, "predict_N requires p >= 3");
  if (ell < 1) throw Error(ErrorKind::InvalidArgument, "predict_N requires ell >= 1");
  std::string source = (p == 3 && ell == 1) ? "Thm2.1" : ell == 1 ? "Thm2.2" : "Thm2.3";
  if (cls != CoeffClass::Zero) return PredictedCount::exact(0, std::move(source), detail::kTwoPeriodicNote);
  if (ell == 1 || ell == p) return PredictedCount::exact(p, std::move(source), detail::kTwoPeriodicNote);
  return PredictedCount::interval(2, ell, std::move(source), detail::kTwoPeriodicNote);
}

/// Claimed 2-periodic count for z^((p-1)^ell) + c.
inline PredictedCount predict_M(std::uint64_t p, std::uint64_t ell, CoeffClass cls) {
  if (p < 5) throw Error(ErrorKind::PrimeTooSmall, "predict_M requires p >= 5");
  if (ell < 1) throw Error(ErrorKind::InvalidArgument, "predict_M requires ell >= 1");
  std::string source = (p == 5 && ell == 1) ? "Thm3.1" : ell == 1 ? "Thm3.2" : "Thm3.3";
  switch (cls) {
    case CoeffClass::Zero: return PredictedCount::exact(2, std::move(source), detail::kTwoPeriodicNote);
    case CoeffClass::PlusOne:
    case CoeffClass::MinusOne: return PredictedCount::exact(1, std::move(source), detail::kTwoPeriodicNote);
    case CoeffClass::Other: break;
  }
  return PredictedCount::exact(0, std::move(source), detail::kTwoPeriodicNote);
}

/// Claimed fixed-point counts, only stated for ell = 1.
inline PredictedCount predict_fixed(Family family, std::uint64_t ell, std::uint64_t p, CoeffClass cls) {
  if (ell != 1) throw Error(ErrorKind::UnsupportedFamily, "fixed-point predictions exist only for ell = 1");
  switch (family) {
    case Family::PrimePower:
      if (p < 3) throw Error(ErrorKind::PrimeTooSmall, "family pl requires p >= 3");
      return PredictedCount::exact(cls == CoeffClass::Zero ? p : 0, "Fixed.pl", detail::kFixedNote);
    case Family::PMinusOnePower: {
      if (p < 5) throw Error(ErrorKind::PrimeTooSmall, "family pm1l requires p >= 5");
      const std::uint64_t k = cls == CoeffClass::Zero ? 2 : cls == CoeffClass::Other ? 0 : 1;
      return PredictedCount::exact(k, "Fixed.pm1l", detail::kFixedNote);
    }
    case Family::RawExponent: break;
  }
  throw Error(ErrorKind::UnsupportedFamily, "no fixed-point prediction for raw exponents");
}

}  // namespace perimap

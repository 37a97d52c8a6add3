#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "perimap/dynamics.hpp"
#include "perimap/error.hpp"
#include "perimap/ffield.hpp"
#include "perimap/numtheory.hpp"
#include "perimap/parallel.hpp"
#include "perimap/predictors.hpp"

namespace perimap {

// --- counting conventions -----------------------------------------------------

enum class Convention { FixedFull, Div2Full, Exact2Full, FixedSub, Div2Sub, Exact2Sub };

inline constexpr std::array<Convention, 6> kAllConventions = {
    Convention::FixedFull, Convention::Div2Full, Convention::Exact2Full,
    Convention::FixedSub,  Convention::Div2Sub,  Convention::Exact2Sub};

inline const char* to_string(Convention c) {
  switch (c) {
    case Convention::FixedFull: return "fixed_full";
    case Convention::Div2Full: return "div2_full";
    case Convention::Exact2Full: return "exact2_full";
    case Convention::FixedSub: return "fixed_sub";
    case Convention::Div2Sub: return "div2_sub";
    case Convention::Exact2Sub: return "exact2_sub";
  }
  return "?";
}

inline std::optional<Convention> parse_convention(const std::string& s) {
  for (auto c : kAllConventions) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

inline bool is_fixed_convention(Convention c) {
  return c == Convention::FixedFull || c == Convention::FixedSub;
}

inline std::uint64_t select(const CensusResult& r, Convention c) {
  switch (c) {
    case Convention::FixedFull: return r.fixed_full;
    case Convention::Div2Full: return r.div2_full;
    case Convention::Exact2Full: return r.exact2_full;
    case Convention::FixedSub: return r.fixed_sub;
    case Convention::Div2Sub: return r.div2_sub;
    case Convention::Exact2Sub: return r.exact2_sub;
  }
  return 0;
}

// --- exact rationals ----------------------------------------------------------

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational of(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw Error(ErrorKind::InvalidArgument, "rational with zero denominator");
    const std::uint64_t g = std::gcd(num, den);
    return {num / g, den / g};
  }

  bool operator==(const Rational&) const = default;

  // Exact comparison through 128-bit cross products.
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<unsigned __int128>(a.num) * b.den < static_cast<unsigned __int128>(b.num) * a.den;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  /// Locale-independent decimal by long division, truncated to `digits`
  /// places, trailing zeros dropped but at least one fractional digit kept.
  std::string decimal(unsigned digits = 12) const {
    std::string out = std::to_string(num / den) + ".";
    unsigned __int128 r = num % den;
    std::string frac;
    for (unsigned i = 0; i < digits && r != 0; ++i) {
      r *= 10;
      frac.push_back(static_cast<char>('0' + static_cast<int>(r / den)));
      r %= den;
    }
    while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
    return out + (frac.empty() ? "0" : frac);
  }

  long double as_long_double() const { return static_cast<long double>(num) / static_cast<long double>(den); }
};

// --- coefficient filters ------------------------------------------------------

/// Set of coefficient classes admitted by a sweep.
struct CoeffFilter {
  std::array<bool, 4> admits_class{true, true, true, true};

  static CoeffFilter all() { return {}; }
  static CoeffFilter only(CoeffClass c) {
    CoeffFilter f{{false, false, false, false}};
    f.admits_class[static_cast<std::size_t>(c)] = true;
    return f;
  }
  static CoeffFilter plus_minus_one() {
    return CoeffFilter{{false, true, true, false}};
  }
  // p does not divide c.
  static CoeffFilter nonzero() { return CoeffFilter{{false, true, true, true}}; }

  bool admits(CoeffClass c) const { return admits_class[static_cast<std::size_t>(c)]; }

  std::string name() const;

  bool operator==(const CoeffFilter&) const = default;
};

inline const std::vector<std::pair<std::string, CoeffFilter>>& named_filters() {
  static const std::vector<std::pair<std::string, CoeffFilter>> table = {
      {"all", CoeffFilter::all()},
      {"zero", CoeffFilter::only(CoeffClass::Zero)},
      {"plus-one", CoeffFilter::only(CoeffClass::PlusOne)},
      {"minus-one", CoeffFilter::only(CoeffClass::MinusOne)},
      {"pm-one", CoeffFilter::plus_minus_one()},
      {"other", CoeffFilter::only(CoeffClass::Other)},
      {"nonzero", CoeffFilter::nonzero()},
  };
  return table;
}

inline std::string CoeffFilter::name() const {
  for (const auto& [n, f] : named_filters()) {
    if (f == *this) return n;
  }
  return "custom";
}

inline std::optional<CoeffFilter> parse_filter(const std::string& s) {
  for (const auto& [n, f] : named_filters()) {
    if (n == s) return f;
  }
  return std::nullopt;
}

/// Number of c in [1, cutoff] with c = r (mod p), 0 <= r < p.
inline std::uint64_t count_residue(std::uint64_t cutoff, std::uint64_t p, std::uint64_t r) {
  if (r == 0) return cutoff / p;
  if (r > cutoff) return 0;
  return (cutoff - r) / p + 1;
}

inline std::uint64_t default_prime_floor(Family f) { return f == Family::PMinusOnePower ? 5 : 3; }

// --- sweeps -------------------------------------------------------------------

/// A (p, c) sweep: primes prime_floor <= p <= cutoff, coefficients 1 <= c <= cutoff.
struct SweepSpec {
  Family family = Family::PrimePower;
  std::uint64_t ell = 1;
  Convention convention = Convention::Div2Full;
  std::uint64_t cutoff = 10;
  CoeffFilter filter = CoeffFilter::all();
  std::uint64_t prime_floor = 0;  // 0: 3 for pl, 5 for pm1l

  std::uint64_t floor() const { return prime_floor == 0 ? default_prime_floor(family) : prime_floor; }

  void validate() const {
    if (family == Family::RawExponent) throw Error(ErrorKind::UnsupportedFamily, "sweeps need family pl or pm1l");
    if (ell < 1) throw Error(ErrorKind::InvalidArgument, "ell must be >= 1");
    if (floor() < default_prime_floor(family)) {
      throw Error(ErrorKind::PrimeTooSmall, std::string("prime floor too small for family ") + to_string(family));
    }
    if (cutoff < floor()) {
      throw Error(ErrorKind::InvalidArgument,
                  "cutoff " + std::to_string(cutoff) + " is below the prime floor " + std::to_string(floor()));
    }
  }
};

struct AvgEstimate {
  std::uint64_t numerator = 0;    // sum of counts
  std::uint64_t denominator = 0;  // number of (p, c) pairs
  Rational value;
  std::uint64_t cutoff = 0;
};

inline MapSpec sweep_map(Family family, std::uint64_t p, std::uint64_t ell, std::uint64_t c) {
  return family == Family::PMinusOnePower ? MapSpec::p_minus_one_power(p, ell, c) : MapSpec::prime_power(p, ell, c);
}

/// Exact mean of the census count over qualifying (p, c) pairs, on F_{p^n}.
/// Counts depend on c only through c mod p, so one census per residue class
/// is weighted by the number of c in [1, cutoff] sharing that residue. The
/// power table z -> z^d is built once per prime and shifted for each residue.
inline AvgEstimate avg_estimate(const SweepSpec& spec, unsigned n, const Limits& limits = {},
                                unsigned threads = 1) {
  spec.validate();
  struct Residue {
    std::uint64_t r, weight;
  };
  std::vector<std::pair<std::uint64_t, std::vector<Residue>>> per_prime;
  for (std::uint64_t p : primes_between(spec.floor(), spec.cutoff)) {
    std::vector<Residue> residues;
    for (std::uint64_t r = 0; r < p; ++r) {
      if (!spec.filter.admits(classify_residue(p, r))) continue;
      const std::uint64_t w = count_residue(spec.cutoff, p, r);
      if (w != 0) residues.push_back({r, w});
    }
    if (!residues.empty()) per_prime.emplace_back(p, std::move(residues));
  }
  if (per_prime.empty()) throw Error(ErrorKind::EmptySelection, "no (p, c) pair satisfies the coefficient filter");

  std::vector<FieldCtx> fields;
  for (const auto& [p, residues] : per_prime) {
    FieldCtx ctx = make_field(p, n);
    check_enumeration_limit(ctx, limits);
    fields.push_back(std::move(ctx));
  }

  AvgEstimate out;
  out.cutoff = spec.cutoff;
  for (std::size_t i = 0; i < per_prime.size(); ++i) {
    const auto& [p, residues] = per_prime[i];
    const FieldCtx& ctx = fields[i];
    const MapSpec base = sweep_map(spec.family, p, spec.ell, 0);
    const std::vector<std::uint64_t> powers = power_table(ctx, base.exponent(), threads);
    for (const Residue& res : residues) {
      const CensusResult r = census_from_table(ctx, shift_table(ctx, powers, res.r), threads);
      out.numerator += select(r, spec.convention) * res.weight;
      out.denominator += res.weight;
    }
  }
  out.value = Rational::of(out.numerator, out.denominator);
  return out;
}

/// Finite-cutoff stand-in for an infinite limit: the average at C against the
/// average at C/2.
struct DivergenceReport {
  AvgEstimate at_cutoff;
  AvgEstimate at_half;
  long double factor = 1.25L;
  bool diverging = false;
};

inline DivergenceReport divergence_check(const SweepSpec& spec, unsigned n, long double factor,
                                         const Limits& limits = {}, unsigned threads = 1) {
  SweepSpec half = spec;
  half.cutoff = spec.cutoff / 2;
  DivergenceReport out;
  out.factor = factor;
  out.at_cutoff = avg_estimate(spec, n, limits, threads);
  out.at_half = avg_estimate(half, n, limits, threads);
  out.diverging = out.at_cutoff.value.as_long_double() >= factor * out.at_half.value.as_long_double();
  return out;
}

enum class DensityPredicate { NEqualsP, NInInterval, MEquals, CountZero };

struct DensityQuery {
  DensityPredicate predicate = DensityPredicate::NEqualsP;
  std::uint64_t k = 0;  // MEquals only
};

struct DensityEstimate {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  Rational value;
  std::uint64_t cutoff = 0;
  std::string label;
};

/// The family whose count a density predicate speaks about.
inline Family density_family(const DensityQuery& q, Family requested) {
  switch (q.predicate) {
    case DensityPredicate::NEqualsP:
    case DensityPredicate::NInInterval: return Family::PrimePower;
    case DensityPredicate::MEquals: return Family::PMinusOnePower;
    case DensityPredicate::CountZero: return requested;
  }
  return requested;
}

/// Share of (p, c) pairs, prime_floor <= p <= C and 1 <= c <= C, whose
/// theorem branch (selected by the congruence class of c mod p) predicts a
/// count satisfying the predicate. Uses spec.family, spec.ell, spec.cutoff
/// and spec.prime_floor; convention and filter are ignored.
inline DensityEstimate density_estimate(const SweepSpec& spec_in, const DensityQuery& query) {
  SweepSpec spec = spec_in;
  spec.family = density_family(query, spec_in.family);
  spec.validate();
  if (query.predicate == DensityPredicate::MEquals && query.k > 2) {
    throw Error(ErrorKind::InvalidArgument, "M can only be predicted as 0, 1 or 2");
  }

  const auto predicted = [&](std::uint64_t p, CoeffClass cls) {
    return spec.family == Family::PrimePower ? predict_N(p, spec.ell, cls) : predict_M(p, spec.ell, cls);
  };
  const auto satisfies = [&](std::uint64_t p, const PredictedCount& pc) {
    switch (query.predicate) {
      case DensityPredicate::NEqualsP: return pc.is_exact() && pc.value() == p;
      case DensityPredicate::NInInterval: return !pc.is_exact();
      case DensityPredicate::MEquals: return pc.is_exact() && pc.value() == query.k;
      case DensityPredicate::CountZero: return pc.is_exact() && pc.value() == 0;
    }
    return false;
  };

  DensityEstimate out;
  out.cutoff = spec.cutoff;
  for (std::uint64_t p : primes_between(spec.floor(), spec.cutoff)) {
    const std::uint64_t zero = count_residue(spec.cutoff, p, 0);
    const std::uint64_t plus = count_residue(spec.cutoff, p, 1);
    const std::uint64_t minus = count_residue(spec.cutoff, p, p - 1);
    const std::array<std::pair<CoeffClass, std::uint64_t>, 4> classes = {{
        {CoeffClass::Zero, zero},
        {CoeffClass::PlusOne, plus},
        {CoeffClass::MinusOne, minus},
        {CoeffClass::Other, spec.cutoff - zero - plus - minus},
    }};
    for (const auto& [cls, count] : classes) {
      if (satisfies(p, predicted(p, cls))) out.hits += count;
    }
    out.total += spec.cutoff;
  }
  if (out.total == 0) throw Error(ErrorKind::EmptySelection, "no primes in range");
  out.value = Rational::of(out.hits, out.total);
  switch (query.predicate) {
    case DensityPredicate::NEqualsP: out.label = "N = p"; break;
    case DensityPredicate::NInInterval: out.label = "N in [2, l]"; break;
    case DensityPredicate::MEquals: out.label = "M = " + std::to_string(query.k); break;
    case DensityPredicate::CountZero: out.label = spec.family == Family::PrimePower ? "N = 0" : "M = 0"; break;
  }
  return out;
}

// --- conformance --------------------------------------------------------------

enum class Verdict { Match, Mismatch, IntervalHit, IntervalMiss };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Match: return "Match";
    case Verdict::Mismatch: return "Mismatch";
    case Verdict::IntervalHit: return "IntervalHit";
    case Verdict::IntervalMiss: return "IntervalMiss";
  }
  return "?";
}

inline Verdict judge(const PredictedCount& predicted, std::uint64_t observed) {
  if (predicted.is_exact()) return predicted.value() == observed ? Verdict::Match : Verdict::Mismatch;
  return predicted.admits(observed) ? Verdict::IntervalHit : Verdict::IntervalMiss;
}

inline bool agrees(Verdict v) { return v == Verdict::Match || v == Verdict::IntervalHit; }

/// Label of the 2-periodic theorem branch a (family, p, ell, class) falls in.
inline std::string two_periodic_branch(Family family, std::uint64_t p, std::uint64_t ell, CoeffClass cls) {
  if (family == Family::PrimePower) {
    if (cls != CoeffClass::Zero) return "Thm2.x c≢0";
    return (ell == 1 || ell == p) ? "Thm2.x c≡0 ℓ∈{1,p}" : "Thm2.x c≡0 ℓ∉{1,p}";
  }
  switch (cls) {
    case CoeffClass::Zero: return "Thm3.x c≡0";
    case CoeffClass::PlusOne: return "Thm3.x c≡+1";
    case CoeffClass::MinusOne: return "Thm3.x c≡−1";
    case CoeffClass::Other: break;
  }
  return "Thm3.x c∉{0,±1}";
}

inline std::string fixed_branch(Family family, CoeffClass cls) {
  if (family == Family::PrimePower) return cls == CoeffClass::Zero ? "Fixed.pl c≡0" : "Fixed.pl c≢0";
  switch (cls) {
    case CoeffClass::Zero: return "Fixed.pm1l c≡0";
    case CoeffClass::PlusOne:
    case CoeffClass::MinusOne: return "Fixed.pm1l c≡±1";
    case CoeffClass::Other: break;
  }
  return "Fixed.pm1l c∉{0,±1}";
}

struct ConformanceCell {
  std::string branch;
  Family family = Family::PrimePower;
  std::uint64_t p = 0;
  std::uint64_t ell = 0;
  unsigned n = 0;
  std::int64_t c = 0;
  Convention convention = Convention::FixedFull;
  PredictedCount predicted;
  std::uint64_t observed = 0;
  Verdict verdict = Verdict::Match;
};

struct ConformanceGrid {
  std::vector<std::uint64_t> primes;
  std::vector<std::uint64_t> ells;
  std::vector<unsigned> degrees;
  // Coefficient range [lo, hi); unset means c in [0, p) for each p.
  std::optional<std::pair<std::int64_t, std::int64_t>> c_range;

  /// Primes 3..pmax, ell 1..ellmax, n 1..nmax.
  static ConformanceGrid up_to(std::uint64_t pmax, std::uint64_t ellmax, unsigned nmax) {
    ConformanceGrid g;
    g.primes = primes_between(3, pmax);
    for (std::uint64_t l = 1; l <= ellmax; ++l) g.ells.push_back(l);
    for (unsigned n = 1; n <= nmax; ++n) g.degrees.push_back(n);
    return g;
  }
};

/// Joins every predictor with the oracle census over the grid, for both
/// families and all six conventions. Fixed-point predictions (ell = 1 only)
/// are joined against the two fixed conventions. Ordered by
/// (family, p, ell, n, c, convention), 2-periodic branch before fixed branch.
inline std::vector<ConformanceCell> conformance_matrix(const ConformanceGrid& grid, const Limits& limits = {},
                                                       unsigned threads = 1) {
  struct Item {
    Family family;
    std::uint64_t p, ell;
    unsigned n;
    std::int64_t c;
  };
  std::vector<Item> items;
  std::map<std::pair<std::uint64_t, unsigned>, FieldCtx> fields;
  for (Family family : {Family::PrimePower, Family::PMinusOnePower}) {
    for (std::uint64_t p : grid.primes) {
      if (!is_prime(p)) throw Error(ErrorKind::NonPrime, "grid prime " + std::to_string(p) + " is not prime");
      if (p < default_prime_floor(family)) continue;
      for (std::uint64_t ell : grid.ells) {
        for (unsigned n : grid.degrees) {
          const auto key = std::make_pair(p, n);
          if (!fields.contains(key)) {
            FieldCtx ctx = make_field(p, n);
            check_enumeration_limit(ctx, limits);
            fields.emplace(key, std::move(ctx));
          }
          const auto [lo, hi] = grid.c_range.value_or(std::make_pair(std::int64_t{0}, static_cast<std::int64_t>(p)));
          for (std::int64_t c = lo; c < hi; ++c) items.push_back({family, p, ell, n, c});
        }
      }
    }
  }

  std::vector<CensusResult> results(items.size());
  parallel_for(items.size(), threads, [&](std::uint64_t i) {
    const Item& it = items[i];
    const MapSpec m = it.family == Family::PrimePower ? MapSpec::prime_power(it.p, it.ell, it.c)
                                                      : MapSpec::p_minus_one_power(it.p, it.ell, it.c);
    results[i] = census(fields.at({it.p, it.n}), m, limits);
  });

  std::vector<ConformanceCell> cells;
  cells.reserve(items.size() * 8);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& it = items[i];
    const CoeffClass cls = classify_coeff(it.p, it.c);
    const PredictedCount two = it.family == Family::PrimePower ? predict_N(it.p, it.ell, cls)
                                                               : predict_M(it.p, it.ell, cls);
    const std::string two_branch = two_periodic_branch(it.family, it.p, it.ell, cls);
    std::optional<PredictedCount> fixed;
    if (it.ell == 1) fixed = predict_fixed(it.family, 1, it.p, cls);
    for (Convention conv : kAllConventions) {
      const std::uint64_t observed = select(results[i], conv);
      cells.push_back({two_branch, it.family, it.p, it.ell, it.n, it.c, conv, two, observed, judge(two, observed)});
      if (fixed && is_fixed_convention(conv)) {
        cells.push_back({fixed_branch(it.family, cls), it.family, it.p, it.ell, it.n, it.c, conv, *fixed, observed,
                         judge(*fixed, observed)});
      }
    }
  }
  return cells;
}

struct SummaryRow {
  std::string branch;
  Convention convention = Convention::FixedFull;
  std::uint64_t cells = 0;
  std::uint64_t agreements = 0;

  Rational rate() const { return Rational::of(agreements, cells); }
};

/// Agreement rate per (branch, convention), sorted by branch label then
/// convention.
inline std::vector<SummaryRow> summarize(const std::vector<ConformanceCell>& cells) {
  std::map<std::pair<std::string, int>, SummaryRow> rows;
  for (const auto& cell : cells) {
    auto& row = rows[{cell.branch, static_cast<int>(cell.convention)}];
    row.branch = cell.branch;
    row.convention = cell.convention;
    ++row.cells;
    row.agreements += agrees(cell.verdict);
  }
  std::vector<SummaryRow> out;
  out.reserve(rows.size());
  for (auto& [key, row] : rows) out.push_back(std::move(row));
  return out;
}

inline const SummaryRow* find_summary(const std::vector<SummaryRow>& rows, const std::string& branch,
                                      Convention conv) {
  for (const auto& r : rows) {
    if (r.branch == branch && r.convention == conv) return &r;
  }
  return nullptr;
}

}  // namespace perimap

#include <gtest/gtest.h>

#include "perimap/stats.hpp"

namespace perimap {
namespace {

SweepSpec sweep(Family family, CoeffFilter filter, Convention conv, std::uint64_t cutoff, std::uint64_t ell = 1) {
  SweepSpec s;
  s.family = family;
  s.ell = ell;
  s.convention = conv;
  s.cutoff = cutoff;
  s.filter = filter;
  return s;
}

TEST(Rational, ReducedAndRendered) {
  EXPECT_EQ(Rational::of(36, 18), (Rational{2, 1}));
  EXPECT_EQ(Rational::of(36, 18).str(), "2/1");
  EXPECT_EQ(Rational::of(36, 18).decimal(), "2.0");
  EXPECT_EQ(Rational::of(6, 30).decimal(), "0.2");
  EXPECT_EQ(Rational::of(7, 20).decimal(), "0.35");
  EXPECT_EQ(Rational::of(0, 7).decimal(), "0.0");
  EXPECT_EQ(Rational::of(1, 3).decimal(4), "0.3333");
  EXPECT_EQ(Rational::of(2, 3).decimal(3), "0.666");  // truncated, not rounded
  EXPECT_TRUE(Rational::of(1, 3) < Rational::of(1, 2));
  // needs the 128-bit cross product
  EXPECT_TRUE(Rational::of(UINT64_MAX, UINT64_MAX - 1) < Rational::of(UINT64_MAX - 1, UINT64_MAX - 2));
  EXPECT_THROW(Rational::of(1, 0), Error);
}

TEST(CountResidue, MatchesDirectCount) {
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 11ULL}) {
    for (std::uint64_t cutoff = 0; cutoff <= 40; ++cutoff) {
      for (std::uint64_t r = 0; r < p; ++r) {
        std::uint64_t n = 0;
        for (std::uint64_t c = 1; c <= cutoff; ++c) n += c % p == r;
        ASSERT_EQ(count_residue(cutoff, p, r), n);
      }
    }
  }
}

TEST(Filters, NamesRoundTrip) {
  for (const auto& [name, f] : named_filters()) {
    EXPECT_EQ(parse_filter(name), f);
    EXPECT_EQ(f.name(), name);
  }
  EXPECT_FALSE(parse_filter("bogus").has_value());
  for (Convention c : kAllConventions) EXPECT_EQ(parse_convention(to_string(c)), c);
  EXPECT_FALSE(parse_convention("div3").has_value());
}

TEST(AvgEstimate, Examples) {
  const AvgEstimate a = avg_estimate(
      sweep(Family::PMinusOnePower, CoeffFilter::only(CoeffClass::Zero), Convention::Div2Sub, 30), 1);
  EXPECT_EQ(a.value, (Rational{2, 1}));
  // primes 5..29 and multiples of p up to 30: 6+4+2+2+2+1+1+1 = 18
  EXPECT_EQ(a.denominator, 18U);
  EXPECT_EQ(a.numerator, 36U);

  for (Convention conv : kAllConventions) {
    EXPECT_EQ(avg_estimate(sweep(Family::PrimePower, CoeffFilter::only(CoeffClass::Other), conv, 30), 2).value,
              (Rational{0, 1}))
        << to_string(conv);
  }
  EXPECT_EQ(avg_estimate(sweep(Family::PMinusOnePower, CoeffFilter::only(CoeffClass::Zero),
                               Convention::Exact2Sub, 30),
                         1)
                .value,
            (Rational{0, 1}));
}

TEST(AvgEstimate, ZeroClassIsTwoAtEveryCutoff) {
  for (std::uint64_t cutoff : {5ULL, 6ULL, 10ULL, 17ULL, 30ULL, 100ULL}) {
    for (std::uint64_t ell : {1ULL, 2ULL}) {
      const AvgEstimate a = avg_estimate(
          sweep(Family::PMinusOnePower, CoeffFilter::only(CoeffClass::Zero), Convention::Div2Sub, cutoff, ell), 1);
      EXPECT_EQ(a.value, (Rational{2, 1})) << "C=" << cutoff << " ell=" << ell;
    }
  }
}

TEST(AvgEstimate, MatchesDirectSweep) {
  // Weighting by residue class must equal a pair-by-pair enumeration.
  const SweepSpec s = sweep(Family::PMinusOnePower, CoeffFilter::nonzero(), Convention::Div2Full, 23);
  std::uint64_t sum = 0, pairs = 0;
  for (std::uint64_t p : primes_between(5, 23)) {
    const FieldCtx f = make_field(p, 2);
    for (std::uint64_t c = 1; c <= 23; ++c) {
      if (c % p == 0) continue;
      sum += census(f, MapSpec::p_minus_one_power(p, 1, c)).div2_full;
      ++pairs;
    }
  }
  const AvgEstimate a = avg_estimate(s, 2);
  EXPECT_EQ(a.numerator, sum);
  EXPECT_EQ(a.denominator, pairs);
  EXPECT_EQ(a.value, Rational::of(sum, pairs));
}

TEST(AvgEstimate, DeterministicAcrossThreads) {
  const SweepSpec s = sweep(Family::PrimePower, CoeffFilter::all(), Convention::Exact2Full, 30);
  const AvgEstimate a = avg_estimate(s, 2, {}, 1);
  const AvgEstimate b = avg_estimate(s, 2, {}, 4);
  EXPECT_EQ(a.numerator, b.numerator);
  EXPECT_EQ(a.denominator, b.denominator);
}

TEST(AvgEstimate, Errors) {
  // At C = 3 the only prime is 3, which has no residue outside {0, +1, -1}.
  try {
    avg_estimate(sweep(Family::PrimePower, CoeffFilter::only(CoeffClass::Other), Convention::Div2Sub, 3), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptySelection);
  }
  EXPECT_THROW(avg_estimate(sweep(Family::PMinusOnePower, CoeffFilter::all(), Convention::Div2Sub, 4), 1), Error);
  EXPECT_THROW(avg_estimate(sweep(Family::RawExponent, CoeffFilter::all(), Convention::Div2Sub, 30), 1), Error);
  Limits small;
  small.max_q = 100;
  try {
    avg_estimate(sweep(Family::PrimePower, CoeffFilter::all(), Convention::Div2Sub, 30), 2, small);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.is_resource_limit());
  }
}

TEST(Divergence, FlagsGrowthOnly) {
  // The exact-2 count on F_{p^2} for c = 0 grows like p^2; a bounded average does not.
  const DivergenceReport grow = divergence_check(
      sweep(Family::PrimePower, CoeffFilter::only(CoeffClass::Zero), Convention::Exact2Full, 60), 2, 1.25L);
  EXPECT_TRUE(grow.diverging);
  EXPECT_EQ(grow.at_half.cutoff, 30U);
  const DivergenceReport flat = divergence_check(
      sweep(Family::PMinusOnePower, CoeffFilter::only(CoeffClass::Zero), Convention::Div2Sub, 60), 1, 1.25L);
  EXPECT_FALSE(flat.diverging);
}

TEST(Density, Examples) {
  const DensityEstimate a = density_estimate(sweep(Family::PrimePower, {}, {}, 10), {DensityPredicate::NEqualsP});
  EXPECT_EQ(a.hits, 6U);
  EXPECT_EQ(a.total, 30U);
  EXPECT_EQ(a.value.decimal(), "0.2");
  EXPECT_EQ(a.label, "N = p");

  const DensityEstimate b = density_estimate(sweep(Family::PrimePower, {}, {}, 10), {DensityPredicate::CountZero});
  EXPECT_EQ(b.hits, 24U);
  EXPECT_EQ(b.total, 30U);

  const DensityEstimate c =
      density_estimate(sweep(Family::PrimePower, {}, {}, 10), {DensityPredicate::MEquals, 1});
  EXPECT_EQ(c.hits, 7U);
  EXPECT_EQ(c.total, 20U);
  EXPECT_EQ(c.value.decimal(), "0.35");
}

TEST(Density, NEqualsPTrendsToZero) {
  Rational prev{1, 1};
  for (std::uint64_t cutoff : {100ULL, 1000ULL, 10000ULL}) {
    const DensityEstimate d =
        density_estimate(sweep(Family::PrimePower, {}, {}, cutoff), {DensityPredicate::NEqualsP});
    EXPECT_TRUE(d.value < prev) << cutoff;
    prev = d.value;
  }
  EXPECT_LT(prev.as_long_double(), 0.05L);
}

TEST(Density, ClassesPartitionPairs) {
  for (std::uint64_t cutoff : {10ULL, 37ULL, 250ULL}) {
    for (std::uint64_t ell : {1ULL, 2ULL, 3ULL}) {
      const SweepSpec s = sweep(Family::PMinusOnePower, {}, {}, cutoff, ell);
      std::uint64_t hits = 0, total = 0;
      for (std::uint64_t k : {0ULL, 1ULL, 2ULL}) {
        const DensityEstimate d = density_estimate(s, {DensityPredicate::MEquals, k});
        hits += d.hits;
        total = d.total;
        EXPECT_LE(d.hits, d.total);
      }
      EXPECT_EQ(hits, total);
    }
    // p^l family: N = p, N in [2, l] and N = 0 partition the pairs too.
    for (std::uint64_t ell : {1ULL, 2ULL, 5ULL}) {
      const SweepSpec s = sweep(Family::PrimePower, {}, {}, cutoff, ell);
      const auto eq = density_estimate(s, {DensityPredicate::NEqualsP});
      const auto iv = density_estimate(s, {DensityPredicate::NInInterval});
      const auto zero = density_estimate(s, {DensityPredicate::CountZero});
      EXPECT_EQ(eq.hits + iv.hits + zero.hits, eq.total);
      if (ell == 1) {
        EXPECT_EQ(iv.hits, 0U);
      }
    }
  }
  EXPECT_THROW(density_estimate(sweep(Family::PrimePower, {}, {}, 10), {DensityPredicate::MEquals, 3}), Error);
}

TEST(Conformance, Examples) {
  ConformanceGrid g;
  g.primes = {5};
  g.ells = {1};
  g.degrees = {1};
  const auto cells = conformance_matrix(g);
  auto find = [&](Family fam, std::int64_t c, Convention conv, const std::string& prefix) -> const ConformanceCell& {
    for (const auto& cell : cells) {
      if (cell.family == fam && cell.c == c && cell.convention == conv && cell.branch.rfind(prefix, 0) == 0) {
        return cell;
      }
    }
    throw std::runtime_error("cell not found");
  };
  const auto& a = find(Family::PMinusOnePower, 0, Convention::Div2Sub, "Thm3");
  EXPECT_EQ(a.predicted.render(), "2");
  EXPECT_EQ(a.observed, 2U);
  EXPECT_EQ(a.verdict, Verdict::Match);
  const auto& b = find(Family::PMinusOnePower, 4, Convention::Div2Sub, "Thm3");
  EXPECT_EQ(b.branch, "Thm3.x c≡−1");
  EXPECT_EQ(b.predicted.render(), "1");
  EXPECT_EQ(b.observed, 2U);
  EXPECT_EQ(b.verdict, Verdict::Mismatch);

  g.primes = {3};
  g.degrees = {2};
  const auto f9 = conformance_matrix(g);
  for (const auto& cell : f9) {
    if (cell.family != Family::PrimePower || cell.c != 0 || cell.branch.rfind("Thm2", 0) != 0) continue;
    if (cell.convention == Convention::Exact2Full) {
      EXPECT_EQ(cell.observed, 6U);
      EXPECT_EQ(cell.verdict, Verdict::Mismatch);
    }
    if (cell.convention == Convention::Div2Sub) {
      EXPECT_EQ(cell.observed, 3U);
      EXPECT_EQ(cell.verdict, Verdict::Match);
    }
  }
}

TEST(Conformance, VerdictsRecomputableAndOrdered) {
  const auto cells = conformance_matrix(ConformanceGrid::up_to(7, 2, 2));
  ASSERT_FALSE(cells.empty());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& cell = cells[i];
    EXPECT_EQ(cell.verdict, judge(cell.predicted, cell.observed));
    EXPECT_GE(cell.p, cell.family == Family::PMinusOnePower ? 5U : 3U);
    if (i == 0) continue;
    const auto& prev = cells[i - 1];
    const auto key = [](const ConformanceCell& x) {
      return std::make_tuple(static_cast<int>(x.family), x.p, x.ell, x.n, x.c, static_cast<int>(x.convention));
    };
    EXPECT_LE(key(prev), key(cell));
  }
  std::uint64_t total = 0;
  for (const auto& row : summarize(cells)) total += row.cells;
  EXPECT_EQ(total, cells.size());
}

TEST(Conformance, DeterministicAcrossThreads) {
  const auto a = conformance_matrix(ConformanceGrid::up_to(7, 2, 2), {}, 1);
  const auto b = conformance_matrix(ConformanceGrid::up_to(7, 2, 2), {}, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].branch, b[i].branch);
    EXPECT_EQ(a[i].observed, b[i].observed);
    EXPECT_EQ(a[i].verdict, b[i].verdict);
  }
}

TEST(Conformance, SummaryFindings) {
  const auto rows = summarize(conformance_matrix(ConformanceGrid::up_to(7, 2, 2)));
  const auto rate = [&](const std::string& branch, Convention conv) {
    const SummaryRow* r = find_summary(rows, branch, conv);
    EXPECT_NE(r, nullptr) << branch;
    return r ? r->rate() : Rational{};
  };
  EXPECT_EQ(rate("Thm3.x c≡0", Convention::Div2Sub), (Rational{1, 1}));
  EXPECT_EQ(rate("Thm3.x c≡−1", Convention::Div2Sub), (Rational{0, 1}));
  EXPECT_EQ(rate("Thm2.x c≢0", Convention::Exact2Full), (Rational{1, 1}));
  EXPECT_EQ(find_summary(rows, "no such branch", Convention::Div2Sub), nullptr);
}

TEST(Conformance, GridErrors) {
  ConformanceGrid g;
  g.primes = {9};
  g.ells = {1};
  g.degrees = {1};
  EXPECT_THROW(conformance_matrix(g), Error);
  Limits small;
  small.max_q = 30;
  EXPECT_THROW(conformance_matrix(ConformanceGrid::up_to(7, 1, 2), small), Error);
}

}  // namespace
}  // namespace perimap

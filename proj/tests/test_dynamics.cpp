#include <gtest/gtest.h>

#include "oracle.hpp"
#include "perimap/dynamics.hpp"

namespace perimap {
namespace {

CensusResult counts(std::uint64_t q, std::array<std::uint64_t, 6> v) {
  return {q, v[0], v[1], v[2], v[3], v[4], v[5]};
}

TEST(EvalMap, Examples) {
  const FieldCtx f5 = make_field(5, 1);
  EXPECT_EQ(eval_map(f5, MapSpec::p_minus_one_power(5, 1, 1), f5.constant(2)), f5.constant(2));
  EXPECT_EQ(eval_map(f5, MapSpec::p_minus_one_power(5, 1, 4), f5.constant(1)), f5.constant(0));
  const FieldCtx f9 = make_field(3, 2);
  for (std::uint64_t z = 0; z < 3; ++z) {
    EXPECT_EQ(eval_map(f9, MapSpec::prime_power(3, 1, 0), f9.constant(z)), f9.constant(z));
  }
}

TEST(EvalMap, ContextAndFamilyChecks) {
  const FieldCtx f5 = make_field(5, 1);
  try {
    eval_map(f5, MapSpec::prime_power(7, 1, 0), f5.zero());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ContextMismatch);
  }
  const FieldCtx f3 = make_field(3, 1);
  EXPECT_THROW(eval_map(f3, MapSpec::p_minus_one_power(3, 1, 0), f3.zero()), Error);
  EXPECT_THROW(eval_map(f5, MapSpec::raw(5, 1, 0), f5.zero()), Error);
  EXPECT_THROW(eval_map(f5, MapSpec::prime_power(5, 0, 0), f5.zero()), Error);
}

TEST(Census, Examples) {
  EXPECT_EQ(census(make_field(3, 2), MapSpec::prime_power(3, 1, 0)), counts(9, {3, 9, 6, 3, 3, 0}));
  EXPECT_EQ(census(make_field(5, 1), MapSpec::p_minus_one_power(5, 1, 4)), counts(5, {0, 2, 2, 0, 2, 2}));
  EXPECT_EQ(census(make_field(5, 1), MapSpec::p_minus_one_power(5, 1, 0)), counts(5, {2, 2, 0, 2, 2, 0}));
}

// Values computed by an independent brute-force script (literal exponents),
// including cells with genuine 2-cycles outside the prime subfield.
TEST(Census, FrozenOracleValues) {
  EXPECT_EQ(census(make_field(7, 2), MapSpec::p_minus_one_power(7, 2, 2)), counts(49, {1, 3, 2, 1, 1, 0}));
  EXPECT_EQ(census(make_field(13, 2), MapSpec::p_minus_one_power(13, 2, 5)), counts(169, {1, 5, 4, 1, 1, 0}));
  EXPECT_EQ(census(make_field(13, 2), MapSpec::p_minus_one_power(13, 2, 7)), counts(169, {3, 5, 2, 1, 1, 0}));
  EXPECT_EQ(census(make_field(5, 2), MapSpec::p_minus_one_power(5, 1, 3)), counts(25, {3, 3, 0, 1, 1, 0}));
}

TEST(Census, MatchesLiteralExponentOracle) {
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    for (unsigned n : {1U, 2U}) {
      const FieldCtx f = make_field(p, n);
      oracle::Poly m;
      for (auto c : f.modulus().coeffs()) m.push_back(static_cast<long long>(c));
      const oracle::Field ref{static_cast<long long>(p), m};
      for (std::uint64_t ell : {1ULL, 2ULL}) {
        for (std::uint64_t c = 0; c < p; ++c) {
          std::vector<MapSpec> maps{MapSpec::prime_power(p, ell, c)};
          if (p >= 5) maps.push_back(MapSpec::p_minus_one_power(p, ell, c));
          for (const MapSpec& map : maps) {
            const auto want = oracle::census(ref, *map.degree(), static_cast<long long>(c));
            ASSERT_EQ(census(f, map), counts(f.q(), want))
                << to_string(map.family) << " p=" << p << " n=" << n << " ell=" << ell << " c=" << c;
          }
        }
      }
    }
  }
}

TEST(Census, ConventionIdentityAndBounds) {
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
    for (unsigned n : {1U, 2U, 3U}) {
      const FieldCtx f = make_field(p, n);
      for (std::uint64_t c = 0; c < p; ++c) {
        const CensusResult r = census(f, MapSpec::prime_power(p, 1, c));
        EXPECT_EQ(r.exact2_full, r.div2_full - r.fixed_full);
        EXPECT_EQ(r.exact2_sub, r.div2_sub - r.fixed_sub);
        EXPECT_LE(r.div2_full, r.q);
        EXPECT_LE(r.div2_sub, p);
        EXPECT_LE(r.div2_sub, r.div2_full);
      }
    }
  }
}

TEST(Census, FrobeniusLaw) {
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
    for (unsigned n = 1; n <= (p == 3 ? 6U : 3U); ++n) {
      const CensusResult r = census(make_field(p, n), MapSpec::prime_power(p, 1, 0));
      EXPECT_EQ(r.fixed_full, p) << "p=" << p << " n=" << n;
      EXPECT_EQ(r.div2_full, n % 2 == 0 ? p * p : p) << "p=" << p << " n=" << n;
    }
  }
}

TEST(Census, DependsOnCoefficientOnlyModP) {
  const FieldCtx f = make_field(7, 2);
  for (std::int64_t c = -7; c < 7; ++c) {
    EXPECT_EQ(census(f, MapSpec::p_minus_one_power(7, 1, c)), census(f, MapSpec::p_minus_one_power(7, 1, c + 7)));
    EXPECT_EQ(census(f, MapSpec::prime_power(7, 2, c)), census(f, MapSpec::prime_power(7, 2, c + 7)));
  }
  EXPECT_EQ(census(f, MapSpec::prime_power(7, 1, BigInt("700000000000000000000000000003"))),
            census(f, MapSpec::prime_power(7, 1, 3)));
}

TEST(Census, ThreadCountDoesNotChangeResult) {
  const FieldCtx f = make_field(3, 7);
  for (std::uint64_t c = 0; c < 3; ++c) {
    const MapSpec m = MapSpec::raw(3, 5, c);
    const CensusResult serial = census(f, m, {}, 1);
    for (unsigned t : {2U, 3U, 8U}) EXPECT_EQ(census(f, m, {}, t), serial);
    EXPECT_EQ(orbit_census(f, m, {}, 4), orbit_census(f, m, {}, 1));
  }
}

TEST(MapTable, ShiftedPowerTableMatchesEvalMap) {
  for (std::uint64_t p : {5ULL, 7ULL, 11ULL}) {
    const FieldCtx f = make_field(p, 2);
    const auto powers = power_table(f, MapSpec::p_minus_one_power(p, 2, 0).exponent());
    for (std::uint64_t c = 0; c < p; ++c) {
      const auto image = shift_table(f, powers, c);
      const MapSpec m = MapSpec::p_minus_one_power(p, 2, c);
      EXPECT_EQ(image, map_table(f, m));
      for (std::uint64_t i = 0; i < f.q(); ++i) {
        ASSERT_EQ(image[i], f.index_of(eval_map(f, m, f.from_index(i))));
      }
    }
  }
}

TEST(Census, EnumerationLimitIsAnError) {
  Limits limits;
  limits.max_q = 26;
  try {
    census(make_field(3, 3), MapSpec::prime_power(3, 1, 0), limits);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EnumerationLimitExceeded);
    EXPECT_TRUE(e.is_resource_limit());
  }
  limits.max_q = 27;
  EXPECT_NO_THROW(census(make_field(3, 3), MapSpec::prime_power(3, 1, 0), limits));
}

TEST(OrbitCensus, Examples) {
  const OrbitCensus a = orbit_census(make_field(5, 1), MapSpec::p_minus_one_power(5, 1, 1));
  EXPECT_EQ(a.period_points, (std::map<std::uint64_t, std::uint64_t>{{1, 1}}));
  EXPECT_EQ(a.tail_point_count, 4U);

  const OrbitCensus b = orbit_census(make_field(3, 2), MapSpec::prime_power(3, 1, 0));
  EXPECT_EQ(b.period_points, (std::map<std::uint64_t, std::uint64_t>{{1, 3}, {2, 6}}));
  EXPECT_EQ(b.tail_point_count, 0U);
  EXPECT_EQ(b.cycles_of_length(2), 3U);

  const OrbitCensus c = orbit_census(make_field(3, 2), MapSpec::raw(3, 9, 0));
  EXPECT_EQ(c.period_points, (std::map<std::uint64_t, std::uint64_t>{{1, 9}}));
  EXPECT_EQ(c.tail_point_count, 0U);
}

TEST(OrbitCensus, HandBuiltTable) {
  // 0 -> 1 -> 2 -> 0 (3-cycle), 3 -> 4 -> 4 (fixed), 5 -> 3, 6 -> 0
  const OrbitCensus o = orbit_census_from_table({1, 2, 0, 4, 4, 3, 0});
  EXPECT_EQ(o.period_points, (std::map<std::uint64_t, std::uint64_t>{{1, 1}, {3, 3}}));
  EXPECT_EQ(o.tail_point_count, 3U);
}

TEST(OrbitCensus, ConsistentWithCensus) {
  for (std::uint64_t p : {5ULL, 7ULL, 11ULL}) {
    for (unsigned n : {1U, 2U}) {
      const FieldCtx f = make_field(p, n);
      for (std::uint64_t ell : {1ULL, 2ULL}) {
        for (std::uint64_t c = 0; c < p; ++c) {
          for (const MapSpec& m : {MapSpec::prime_power(p, ell, c), MapSpec::p_minus_one_power(p, ell, c)}) {
            const CensusResult r = census(f, m);
            const OrbitCensus o = orbit_census(f, m);
            ASSERT_EQ(o.periodic_points() + o.tail_point_count, f.q());
            ASSERT_EQ(o.points_of_period(1), r.fixed_full);
            ASSERT_EQ(o.points_of_period(2), r.exact2_full);
            ASSERT_EQ(o.points_of_period(1) + o.points_of_period(2), r.div2_full);
            for (const auto& [len, pts] : o.period_points) ASSERT_EQ(pts % len, 0U);
          }
        }
      }
    }
  }
}

TEST(CountRootsGcd, Examples) {
  EXPECT_EQ(count_roots_gcd(make_field(3, 2), MapSpec::prime_power(3, 1, 0), IteratePoly::Phi2MinusId), 9U);
  EXPECT_EQ(count_roots_gcd(make_field(5, 1), MapSpec::p_minus_one_power(5, 1, 0), IteratePoly::Phi2MinusId), 2U);
  EXPECT_EQ(count_roots_gcd(make_field(5, 1), MapSpec::p_minus_one_power(5, 1, 2), IteratePoly::PhiMinusId), 1U);
}

TEST(CountRootsGcd, IteratePolynomialShape) {
  // (x^3 + 1)^3 + 1 - x = x^9 + 2 - x over F_3
  const FpPoly f = iterate_polynomial(MapSpec::prime_power(3, 1, 1), IteratePoly::Phi2MinusId);
  std::vector<std::uint64_t> want(10, 0);
  want[0] = 2;
  want[1] = 2;
  want[9] = 1;
  EXPECT_EQ(f.coeffs(), want);
  // (x^4 + 1)^4 + 1 - x over F_5: binomials 1,4,6,4,1 -> 1,4,1,4,1
  const FpPoly g = iterate_polynomial(MapSpec::p_minus_one_power(5, 1, 1), IteratePoly::Phi2MinusId);
  EXPECT_EQ(g[16], 1U);
  EXPECT_EQ(g[12], 4U);
  EXPECT_EQ(g[8], 1U);
  EXPECT_EQ(g[4], 4U);
  EXPECT_EQ(g[0], 2U);
  EXPECT_EQ(g[1], 4U);
}

TEST(CountRootsGcd, AgreesWithEnumeration) {
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
    for (unsigned n : {1U, 2U}) {
      const FieldCtx f = make_field(p, n);
      for (std::uint64_t ell : {1ULL, 2ULL}) {
        for (std::uint64_t c = 0; c < p; ++c) {
          std::vector<MapSpec> maps{MapSpec::prime_power(p, ell, c)};
          if (p >= 5) maps.push_back(MapSpec::p_minus_one_power(p, ell, c));
          for (const MapSpec& m : maps) {
            const CensusResult r = census(f, m);
            ASSERT_EQ(count_roots_gcd(f, m, IteratePoly::Phi2MinusId), r.div2_full);
            ASSERT_EQ(count_roots_gcd(f, m, IteratePoly::PhiMinusId), r.fixed_full);
          }
        }
      }
    }
  }
}

TEST(CountRootsGcd, DegreeLimit) {
  const FieldCtx f = make_field(11, 1);
  try {
    count_roots_gcd(f, MapSpec::prime_power(11, 2, 0), IteratePoly::Phi2MinusId);  // degree 121^2
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegreeLimitExceeded);
  }
  Limits big;
  big.max_poly_degree = 1 << 16;
  EXPECT_EQ(count_roots_gcd(f, MapSpec::prime_power(11, 2, 0), IteratePoly::Phi2MinusId, big), 11U);
  // literal degree beyond 64 bits
  EXPECT_THROW(count_roots_gcd(f, MapSpec::prime_power(11, 40, 0), IteratePoly::PhiMinusId, big), Error);
}

TEST(HasRootInExtension, Examples) {
  EXPECT_TRUE(has_root_in_extension(3, {1, 0, 1}, 2));
  EXPECT_FALSE(has_root_in_extension(3, {1, 0, 1}, 3));
  EXPECT_TRUE(has_root_in_extension(5, {2, 1}, 1));  // x - 3
  EXPECT_FALSE(has_root_in_extension(5, {3}, 1));    // nonzero constant
  EXPECT_THROW(has_root_in_extension(5, {}, 1), Error);
}

TEST(HasRootInExtension, SmallestSplittingDegree) {
  // An irreducible polynomial of degree d has a root in F_{p^n} iff d | n.
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
    for (unsigned d = 1; d <= 4; ++d) {
      const FpPoly f = make_field(p, d).modulus();
      for (unsigned n = 1; n <= 8; ++n) EXPECT_EQ(has_root_in_extension(f, n), n % d == 0);
    }
  }
}

}  // namespace
}  // namespace perimap

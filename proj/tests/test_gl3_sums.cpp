#include <gtest/gtest.h>

#include <chrono>

#include "gl3ks/gl3_sums.hpp"
#include "oracles.hpp"

using namespace gl3ks;

namespace {

CycInt naive(Int m1, Int m2, Int n1, Int n2, Int D1, Int D2) {
  return s_long_naive({m1, m2, n1, n2, D1, D2});
}
CycInt fast(Int m1, Int m2, Int n1, Int n2, Int D1, Int D2) {
  return s_long_fast({m1, m2, n1, n2, D1, D2});
}

}  // namespace

TEST(LongSum, Examples) {
  EXPECT_EQ(naive(1, 1, 1, 1, 1, 1), CycInt{1});
  EXPECT_EQ(naive(1, 1, 1, 1, 3, 3), CycInt{4});
  EXPECT_EQ(naive(1, 3, 3, 1, 3, 3), CycInt{7});
  EXPECT_EQ(naive(1, 1, 1, 1, 2, 2), CycInt{3});
  EXPECT_EQ(naive(1, 1, 1, 1, 4, 8), oracle::gl3_sum(1, 1, 1, 1, 4, 8));
}

TEST(LongSum, NaiveMatchesFourLoopOracle) {
  for (Int D1 = 1; D1 <= 8; ++D1)
    for (Int D2 = 1; D2 <= 8; ++D2)
      for (auto [m1, m2, n1, n2] : {std::array<Int, 4>{1, 1, 1, 1}, {1, 2, 3, 1}, {2, -1, 5, 3}, {3, 4, 2, -7}})
        ASSERT_EQ(naive(m1, m2, n1, n2, D1, D2), oracle::gl3_sum(m1, m2, n1, n2, D1, D2))
            << to_string(Gl3Args{m1, m2, n1, n2, D1, D2});
}

TEST(LongSum, RejectsInvalidArguments) {
  EXPECT_THROW(naive(0, 1, 1, 1, 3, 3), InvalidArgument);
  EXPECT_THROW(fast(1, 1, 1, 0, 3, 3), InvalidArgument);
  EXPECT_THROW(naive(1, 1, 1, 1, 0, 3), InvalidArgument);
  EXPECT_THROW(naive(1, 1, 1, 1, 3, -2), InvalidArgument);
}

TEST(LongSum, NaiveCap) {
  EXPECT_THROW(s_long_naive({1, 1, 1, 1, 11, 11}, Caps{100}), CapExceeded);
  EXPECT_NO_THROW(s_long_naive({1, 1, 1, 1, 3, 3}, Caps{100}));
  EXPECT_THROW(s_long_naive({1, 1, 1, 1, 101, 101}), CapExceeded);
}

TEST(LongSum, RealValued) {
  for (Int D1 = 1; D1 <= 12; ++D1)
    for (Int D2 = 1; D2 <= 12; ++D2)
      EXPECT_LT(std::abs(fast(1, 2, 3, 1, D1, D2).to_complex().imag()), 1e-9) << D1 << "," << D2;
}

TEST(WellDefinedness, Examples) {
  Rng rng(1);
  EXPECT_TRUE(well_definedness_check({1, 1, 1, 1, 2, 2}, 20, rng));
  EXPECT_TRUE(well_definedness_check({1, 2, 3, 1, 6, 4}, 20, rng));
  EXPECT_TRUE(well_definedness_check({1, 1, 1, 1, 1, 1}, 5, rng));
  EXPECT_TRUE(well_definedness_check({2, 5, -1, 3, 9, 6}, 5, rng));
}

TEST(FactorCoprime, Examples) {
  const auto pair = factor_coprime({1, 1, 1, 1, 3, 4});
  EXPECT_EQ(pair.first, arith::classical_kloosterman(4, 1, 3));
  EXPECT_EQ(pair.second, arith::classical_kloosterman(3, 1, 4));
  EXPECT_EQ(pair.product(), naive(1, 1, 1, 1, 3, 4));
  EXPECT_EQ(factor_coprime({1, 5, 1, 7, 1, 9}).product(), arith::classical_kloosterman(5, 7, 9));
  EXPECT_THROW(factor_coprime({1, 1, 1, 1, 4, 6}), ModuliNotCoprime);
}

TEST(FactorCoprime, MatchesOracleOnCoprimeModuli) {
  for (Int D1 = 1; D1 <= 12; ++D1)
    for (Int D2 = 1; D2 <= 12; ++D2) {
      if (std::gcd(D1, D2) != 1) continue;
      for (Int m = 1; m <= 3; ++m)
        for (Int n = 1; n <= 3; ++n)
          ASSERT_EQ(factor_coprime({1, m, n, 1, D1, D2}).product(), oracle::gl3_sum(1, m, n, 1, D1, D2));
    }
}

TEST(PrimePrimePower, Examples) {
  EXPECT_EQ(s_prime_primepower(1, 1, 1, 1, 3, 1), CycInt{4});
  EXPECT_EQ(s_prime_primepower(1, 1, 1, 1, 3, 2), oracle::gl3_sum(1, 1, 1, 1, 3, 9));
  EXPECT_EQ(s_prime_primepower(1, 2, 1, 1, 2, 3), oracle::gl3_sum(1, 2, 1, 1, 2, 8));
  EXPECT_THROW(s_prime_primepower(1, 1, 1, 1, 4, 1), InvalidArgument);
  EXPECT_THROW(s_prime_primepower(1, 1, 1, 1, 3, 0), InvalidArgument);
}

TEST(PrimePrimePower, MatchesOracleIncludingZeroFrequencies) {
  for (Int p : {2, 3, 5})
    for (int l = 1; arith::checked_pow(p, l) <= 27; ++l) {
      const Int q = arith::checked_pow(p, l);
      for (Int m1 : {Int{0}, Int{1}, p})
        for (Int m2 : {Int{0}, Int{1}, Int{2}, p})
          for (Int n1 : {Int{1}, p})
            for (Int n2 : {Int{0}, Int{1}, p + 1})
              ASSERT_EQ(s_prime_primepower(m1, m2, n1, n2, p, l), oracle::gl3_sum(m1, m2, n1, n2, p, q))
                  << p << "^" << l << " " << m1 << " " << m2 << " " << n1 << " " << n2;
    }
}

TEST(PrimePrime, CaseTable) {
  // p+1 if p divides neither m nor n, 1 if exactly one, p^2 - p + 1 if both.
  for (Int p : {2, 3, 5, 7})
    for (Int m = 1; m <= 2 * p; ++m)
      for (Int n = 1; n <= 2 * p; ++n) {
        const int divides = (m % p == 0) + (n % p == 0);
        const Int expected = divides == 0 ? p + 1 : divides == 1 ? 1 : p * p - p + 1;
        ASSERT_EQ(fast(1, m, n, 1, p, p), CycInt{expected});
      }
}

TEST(FastEvaluator, Examples) {
  EXPECT_EQ(fast(1, 1, 1, 1, 15, 8), naive(1, 1, 1, 1, 15, 8));
  EXPECT_EQ(fast(1, 1, 1, 1, 2, 2), CycInt{3});
}

TEST(FastEvaluator, MatchesOracle) {
  for (Int D1 = 1; D1 <= 12; ++D1)
    for (Int D2 = 1; D2 <= 12; ++D2)
      for (auto [m1, m2, n1, n2] : {std::array<Int, 4>{1, 1, 1, 1}, {1, 3, 2, 1}, {5, -2, 4, 9}})
        ASSERT_EQ(fast(m1, m2, n1, n2, D1, D2), oracle::gl3_sum(m1, m2, n1, n2, D1, D2))
            << to_string(Gl3Args{m1, m2, n1, n2, D1, D2});
}

TEST(FastEvaluator, MatchesNaiveOnMixedBlocks) {
  for (auto [D1, D2] : {std::pair<Int, Int>{36, 12}, {18, 20}, {40, 6}, {27, 9}, {16, 8}, {45, 30}})
    for (Int m : {1, 2, 3})
      EXPECT_EQ(fast(1, m, 1, m + 1, D1, D2), naive(1, m, 1, m + 1, D1, D2)) << D1 << "," << D2;
}

TEST(FastEvaluator, AtLeastTenTimesFasterThanNaive) {
  using clock = std::chrono::steady_clock;
  const Gl3Args args{1, 1, 1, 1, 60, 36};
  auto t0 = clock::now();
  const auto slow = s_long_naive(args);
  auto t1 = clock::now();
  CycInt quick;
  for (int i = 0; i < 10; ++i) quick = s_long_fast(args);
  auto t2 = clock::now();
  EXPECT_EQ(slow, quick);
  const double naive_s = std::chrono::duration<double>(t1 - t0).count();
  const double fast_s = std::chrono::duration<double>(t2 - t1).count() / 10.0;
  EXPECT_GE(naive_s, 10.0 * fast_s) << "naive " << naive_s << "s, fast " << fast_s << "s";
}

TEST(FastEvaluator, LargeModuliWithinCaps) {
  // (p, p^l) and coprime blocks only: no naive fallback needed.
  EXPECT_NO_THROW(s_long_fast({1, 1, 1, 1, 7 * 11, 7 * 49}, Caps{1}));
  EXPECT_THROW(s_long_fast({1, 1, 1, 1, 81, 81}, Caps{1000000}), CapExceeded);
}

TEST(Symmetries, HoldOnSmallModuli) {
  EXPECT_TRUE(symmetry_identities({1, 1, 1, 1, 1, 1})[0].holds);
  for (Int D1 = 1; D1 <= 8; ++D1)
    for (Int D2 = 1; D2 <= 8; ++D2)
      for (Int a = 1; a <= 3; ++a)
        for (Int x = 1; x <= 3; ++x) {
          for (const auto& r : symmetry_identities({a, 2, x, 1, D1, D2}))
            if (r.applicable) ASSERT_TRUE(r.holds) << r.name << " " << D1 << "," << D2;
          for (const auto& r : symmetry_identities({1, x, 2, a, D1, D2}))
            if (r.applicable) ASSERT_TRUE(r.holds) << r.name << " " << D1 << "," << D2;
        }
}

TEST(Symmetries, FrequencySwapMatchesOracle) {
  for (auto [D1, D2] : {std::pair<Int, Int>{4, 6}, {6, 9}, {8, 4}})
    EXPECT_EQ(oracle::gl3_sum(1, 2, 3, 5, D1, D2), oracle::gl3_sum(3, 5, 1, 2, D1, D2));
}

TEST(Decomposition, Examples) {
  EXPECT_EQ(decompose_moduli(6, 10), (ModuliDecomposition{2, 1, 1, 3, 5}));
  EXPECT_EQ(decompose_moduli(4, 2), (ModuliDecomposition{1, 4, 2, 1, 1}));
  EXPECT_EQ(decompose_moduli(1, 1), (ModuliDecomposition{}));
  EXPECT_EQ(decompose_moduli(2 * 9 * 5, 2 * 3 * 49), (ModuliDecomposition{2, 9, 3, 5, 49}));
}

TEST(Decomposition, ValidForAllPairs) {
  for (Int D1 = 1; D1 <= 120; ++D1)
    for (Int D2 = 1; D2 <= 120; ++D2) {
      const auto d = decompose_moduli(D1, D2);
      ASSERT_NO_THROW(validate_decomposition(d, D1, D2)) << D1 << "," << D2;
      EXPECT_EQ(d.g1() * d.E1, D1);
      EXPECT_EQ(d.g2() * d.E2, D2);
    }
}

TEST(Decomposition, RejectsInvalid) {
  EXPECT_THROW(validate_decomposition({1, 2, 2, 3, 5}, 6, 10), InvalidDecomposition);  // exponent 1 in both
  EXPECT_THROW(validate_decomposition({1, 1, 1, 6, 10}, 6, 10), InvalidDecomposition);
  EXPECT_THROW(validate_decomposition({4, 1, 1, 1, 1}, 4, 4), InvalidDecomposition);
  EXPECT_THROW(validate_decomposition({1, 4, 3, 1, 1}, 4, 3), InvalidDecomposition);
}

TEST(SplitH, PartitionsByExponentPattern) {
  const auto s = split_h(2 * 9 * 125, 4 * 3 * 25);
  EXPECT_EQ(s.j1, 2);
  EXPECT_EQ(s.j2, 4);
  EXPECT_EQ(s.k1, 9);
  EXPECT_EQ(s.k2, 3);
  EXPECT_EQ(s.l1, 125);
  EXPECT_EQ(s.l2, 25);
  EXPECT_THROW(split_h(2, 3), InvalidDecomposition);
  EXPECT_THROW(split_h(2, 2), InvalidDecomposition);
}

TEST(TwistedFactor, Examples) {
  for (Int m = 1; m <= 3; ++m)
    for (Int n = 1; n <= 3; ++n) {
      EXPECT_EQ(twisted_factor({1, m, n, 1, 6, 10}, decompose_moduli(6, 10)).product(),
                oracle::gl3_sum(1, m, n, 1, 6, 10));
      const auto tf = twisted_factor({1, m, n, 1, 4, 2}, decompose_moduli(4, 2));
      EXPECT_EQ(tf.e_factor, CycInt{1});
      EXPECT_EQ(tf.g_factor, naive(1, m, n, 1, 4, 2));
      const auto cop = twisted_factor({1, m, n, 1, 5, 8}, decompose_moduli(5, 8));
      EXPECT_EQ(cop.g_factor, CycInt{1});
      EXPECT_EQ(cop.e_factor, factor_coprime({1, m, n, 1, 5, 8}).product());
    }
  EXPECT_THROW(twisted_factor({1, 1, 1, 1, 6, 10}, {1, 1, 1, 6, 10}), InvalidDecomposition);
}

TEST(TwistedFactor, AllModuliUpToTwelve) {
  for (Int D1 = 1; D1 <= 12; ++D1)
    for (Int D2 = 1; D2 <= 12; ++D2)
      for (Int m : {1, 2, 5})
        ASSERT_EQ(twisted_factor({1, m, 3, 1, D1, D2}, decompose_moduli(D1, D2)).product(),
                  naive(1, m, 3, 1, D1, D2))
            << D1 << "," << D2;
}

TEST(CompleteSum, Examples) {
  EXPECT_TRUE(complete_sum_identity_check(1, 1, 3, 1));
  CycInt lhs{0};
  for (Int d2 = 1; d2 <= 3; ++d2) {
    const auto s = arith::classical_kloosterman(1, d2, 3);
    lhs += s * s;
  }
  EXPECT_EQ(lhs, CycInt{6});
  EXPECT_THROW(complete_sum_identity_check(1, 1, 0, 1), InvalidArgument);
}

TEST(CompleteSum, HoldsOnGrid) {
  for (Int D1 = 1; D1 <= 20; ++D1)
    for (Int M = 1; M <= 3; ++M)
      for (Int n1 : {1, 2, 7})
        for (Int n2 : {Int{0}, Int{1}, Int{3}, D1 + 1})
          ASSERT_TRUE(complete_sum_identity_check(n1, n2, D1, M)) << n1 << " " << n2 << " " << D1 << " " << M;
}

TEST(WeilRatio, BoundedOnSmallGrid) {
  double worst = 0.0;
  for (Int D1 = 1; D1 <= 16; ++D1)
    for (Int D2 = 1; D2 <= 16; ++D2) {
      const Gl3Args a{1, 1, 1, 1, D1, D2};
      worst = std::max(worst, weil_ratio(a, s_long_fast(a)));
    }
  EXPECT_GT(worst, 0.0);
  EXPECT_LT(worst, 10.0);
}

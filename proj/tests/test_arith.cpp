#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "gl3ks/arith.hpp"
#include "gl3ks/classical.hpp"
#include "oracles.hpp"

using namespace gl3ks;
using namespace gl3ks::arith;

TEST(ModInverse, Examples) {
  EXPECT_EQ(mod_inverse(1, 7).value, 1);
  EXPECT_EQ(mod_inverse(2, 5).value, 3);
  Int scanned = -1;
  for (Int v = 0; v < 21; ++v)
    if ((10 * v) % 21 == 1) scanned = v;
  EXPECT_EQ(mod_inverse(10, 21).value, scanned);
  EXPECT_EQ(mod_inverse(-3, 7).value, 2);
  EXPECT_EQ(mod_inverse(5, 1).value, 0);
}

TEST(ModInverse, RejectsNonUnits) {
  EXPECT_THROW(mod_inverse(6, 9), NotInvertible);
  EXPECT_THROW(mod_inverse(0, 4), NotInvertible);
  EXPECT_THROW(mod_inverse(1, 0), InvalidArgument);
}

TEST(NuP, Examples) {
  EXPECT_EQ(nu_p(12, 2), 2);
  EXPECT_EQ(nu_p(ResidueClass{0, 27}, 3), 3);
  EXPECT_EQ(nu_p(ResidueClass{9, 27}, 3), 2);
  EXPECT_EQ(nu_p(ResidueClass{0, 1}, 5), 0);
  EXPECT_THROW(nu_p(0, 2), InvalidArgument);
  EXPECT_THROW(nu_p(ResidueClass{1, 12}, 2), InvalidArgument);
}

TEST(NuP, MatchesDivisibilityScanModulo125) {
  for (Int t = 0; t < 125; ++t) {
    int expected = 0;
    for (int j = 3; j >= 0; --j) {
      Int pj = 1;
      for (int i = 0; i < j; ++i) pj *= 5;
      if (t % pj == 0) {
        expected = j;
        break;
      }
    }
    EXPECT_EQ(nu_p(ResidueClass{t, 125}, 5), expected) << t;
  }
}

TEST(NuP, IntegerAndResidueFormsAgreeBelowCap) {
  for (Int p : {2, 3, 5})
    for (int k = 1; k <= 4; ++k) {
      const Int q = checked_pow(p, k);
      for (Int t = 1; t <= q; ++t)
        if (nu_p(t, p) < k) EXPECT_EQ(nu_p(t, p), nu_p(ResidueClass{t, q}, p));
    }
}

TEST(Crt, Examples) {
  EXPECT_EQ(crt_combine({{1, 2}, {2, 3}}), (ResidueClass{5, 6}));
  EXPECT_EQ(crt_combine({{0, 4}, {0, 9}}), (ResidueClass{0, 36}));
  EXPECT_THROW(crt_combine({{1, 4}, {1, 6}}), ModuliNotCoprime);
}

TEST(Crt, RandomTriplesSatisfyEveryCongruence) {
  std::mt19937_64 gen(3);
  const Int moduli[][3] = {{3, 5, 7}, {4, 9, 25}, {8, 11, 13}, {1, 17, 19}};
  for (const auto& m : moduli)
    for (int i = 0; i < 50; ++i) {
      std::vector<ResidueClass> rs;
      for (Int q : m) rs.emplace_back(static_cast<Int>(gen() % 1000) - 500, q);
      const auto r = crt_combine(rs);
      EXPECT_EQ(r.modulus, m[0] * m[1] * m[2]);
      for (const auto& x : rs) EXPECT_EQ(mod(r.value, x.modulus), x.value);
    }
}

TEST(EulerPhi, MatchesCoprimalityScan) {
  EXPECT_EQ(euler_phi(1), 1);
  EXPECT_EQ(euler_phi(8), 4);
  for (Int n : {360, 97, 1000, 2310}) {
    Int count = 0;
    for (Int i = 1; i <= n; ++i) count += std::gcd(i, n) == 1;
    EXPECT_EQ(euler_phi(n), count) << n;
  }
}

TEST(Factorize, ReconstructsValue) {
  for (Int n = 1; n <= 3000; ++n) {
    const auto f = factorize(n);
    Int v = 1;
    Int last = 1;
    for (const auto& pe : f.factors) {
      EXPECT_GT(pe.prime, last);
      EXPECT_GE(pe.exponent, 1);
      EXPECT_TRUE(is_prime(pe.prime));
      last = pe.prime;
      v *= checked_pow(pe.prime, pe.exponent);
    }
    EXPECT_EQ(v, n);
  }
}

TEST(CheckedArithmetic, OverflowIsAnError) {
  EXPECT_THROW(checked_mul(Int{1} << 40, Int{1} << 40), Overflow);
  EXPECT_THROW(checked_pow(10, 30), Overflow);
  EXPECT_EQ(mulmod(Int{1} << 62, Int{1} << 62, 1'000'000'007), mulmod(mod(Int{1} << 62, 1'000'000'007), mod(Int{1} << 62, 1'000'000'007), 1'000'000'007));
}

TEST(ClassicalKloosterman, Examples) {
  EXPECT_EQ(classical_kloosterman(1, 1, 1), CycInt{1});
  for (Int p : {2, 3, 5, 7, 11}) EXPECT_EQ(classical_kloosterman(1, 0, p), CycInt{-1});
  EXPECT_TRUE(classical_kloosterman(1, 6, 9).is_zero());
}

TEST(ClassicalKloosterman, MatchesFloatSummation) {
  for (Int c = 1; c <= 30; ++c)
    for (Int m = -3; m <= 3; ++m)
      for (Int n = 0; n <= 4; ++n)
        EXPECT_LT(std::abs(classical_kloosterman(m, n, c).to_complex() - oracle::kloosterman(m, n, c)), 1e-10);
}

TEST(ClassicalKloosterman, SymmetricInMAndN) {
  for (Int c = 1; c <= 50; ++c)
    for (Int m = 1; m <= 50; ++m)
      for (Int n = m + 1; n <= 50; ++n)
        ASSERT_EQ(classical_kloosterman(m, n, c), classical_kloosterman(n, m, c)) << m << " " << n << " " << c;
}

TEST(ClassicalKloosterman, TwistedMultiplicativity) {
  for (Int c1 = 1; c1 <= 60; ++c1)
    for (Int c2 = 1; c1 * c2 <= 60; ++c2) {
      if (std::gcd(c1, c2) != 1) continue;
      const Int i2 = inv(c2, c1), i1 = inv(c1, c2);
      for (Int m = 0; m < 5; ++m)
        for (Int n = 0; n < 5; ++n)
          ASSERT_EQ(classical_kloosterman(m, n, c1 * c2),
                    classical_kloosterman(m * i2, n * i2, c1) * classical_kloosterman(m * i1, n * i1, c2));
    }
}

TEST(ClassicalKloosterman, VanishesAtPrimePowerWithDivisibleSecondArgument) {
  for (Int p : {2, 3, 5})
    for (int c = 2; checked_pow(p, c) <= 125; ++c) {
      const Int q = checked_pow(p, c);
      for (Int alpha = 1; alpha < q; ++alpha) {
        if (alpha % p == 0) continue;
        for (Int beta = 1; beta * p < q; ++beta) {
          if (beta % p == 0) continue;
          for (Int pb = p; beta * pb < q; pb *= p)
            ASSERT_TRUE(classical_kloosterman(alpha, beta * pb, q).is_zero());
        }
      }
    }
}

TEST(RamanujanSum, Examples) {
  EXPECT_EQ(ramanujan_sum(0, 3), CycInt{2});
  EXPECT_EQ(ramanujan_sum(1, 4), CycInt{0});
  EXPECT_EQ(ramanujan_sum(2, 4), CycInt{-2});
}

TEST(RamanujanSum, AlwaysRational) {
  for (Int c = 1; c <= 60; ++c)
    for (Int n = -5; n <= 70; ++n) {
      const auto v = ramanujan_sum(n, c);
      ASSERT_TRUE(v.is_rational()) << n << " " << c;
      if (n % c == 0) EXPECT_EQ(v.rational_value(), euler_phi(c));
    }
}

TEST(SamePrimeSupport, Examples) {
  EXPECT_EQ(same_prime_support_count(1, 10), 1);
  EXPECT_EQ(same_prime_support_count(2, 10), 3);
}

TEST(SamePrimeSupport, MatchesFullScan) {
  constexpr Int X = 10000;
  std::vector<Int> rad(X + 1, 1);
  for (Int n = 2; n <= X; ++n)
    for (const auto& f : factorize(n).factors) rad[n] *= f.prime;
  for (Int q : {1, 2, 6, 12, 30, 35, 210, 97, 10000}) {
    Int scan = 0;
    for (Int n = 1; n <= X; ++n) scan += rad[n] == rad[q];
    EXPECT_EQ(same_prime_support_count(q, X), scan) << q;
  }
  Int small = 0;
  for (Int n = 1; n <= 100; ++n) small += rad[n] == 6;
  EXPECT_EQ(same_prime_support_count(6, 100), small);
}

TEST(Divisors, SortedAndComplete) {
  EXPECT_EQ(divisors(12), (std::vector<Int>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(divisors(1), (std::vector<Int>{1}));
  EXPECT_EQ(divisors(49), (std::vector<Int>{1, 7, 49}));
}

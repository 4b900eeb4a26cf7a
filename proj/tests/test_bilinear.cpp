#include <gtest/gtest.h>

#include <sstream>

#include "gl3ks/bilinear.hpp"
#include "gl3ks/calibration.hpp"
#include "oracles.hpp"

using namespace gl3ks;

namespace {

CoeffSeq delta(Int N, Int at) {
  CoeffSeq s(N);
  s.set(at, 1.0);
  return s;
}

CoeffSeq signs(Int N, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  CoeffSeq s(N);
  for (Int n = 1; n <= N; ++n) s.set(n, gen() % 2 ? 1.0 : -1.0);
  return s;
}

GammaSeq full_gamma(Int X1, Int X2, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> phase(0.0, 1.0);
  GammaSeq g(X1, X2);
  for (Int D1 = 1; D1 <= X1; ++D1)
    for (Int D2 = 1; D2 <= X2; ++D2) g.set(D1, D2, oracle::e(phase(gen)));
  return g;
}

// Σ_q Σ_{d1 | q} (d1/q) Σ_{c <= X1/q, (c,q)=1} Σ*_{t mod c} |Σ_{(n,q)=d1} β_n e(tn/c)|².
double m_beta_oracle(const CoeffSeq& beta, Int X1, Int X2, Int Q) {
  double total = 0.0;
  for (Int q = 1; q <= std::min({X1, X2, Q}); ++q)
    for (Int d1 = 1; d1 <= q; ++d1) {
      if (q % d1) continue;
      for (Int c = 1; c * q <= X1; ++c) {
        if (std::gcd(c, q) != 1) continue;
        for (Int t = 1; t <= c; ++t) {
          if (std::gcd(t, c) != 1) continue;
          std::complex<double> s{};
          for (Int n = 1; n <= beta.bound(); ++n)
            if (std::gcd(n, q) == d1)
              s += beta.at(n) * oracle::e(static_cast<double>(t * n) / static_cast<double>(c));
          total += static_cast<double>(d1) / static_cast<double>(q) * std::norm(s);
        }
      }
    }
  return total;
}

std::complex<double> bilinear_oracle(const CoeffSeq& alpha, const CoeffSeq& beta, const GammaSeq& gamma,
                                     int e1 = 1, int e2 = 1) {
  std::complex<double> total{};
  for (Int D1 = 1; D1 <= gamma.X1(); ++D1)
    for (Int D2 = 1; D2 <= gamma.X2(); ++D2)
      for (Int m = 1; m <= alpha.bound(); ++m)
        for (Int n = 1; n <= beta.bound(); ++n)
          total += gamma.at(D1, D2) * alpha.at(m) * beta.at(n) *
                   oracle::gl3_sum(1, e1 * m, e2 * n, 1, D1, D2).to_complex();
  return total;
}

}  // namespace

TEST(Sequences, BoundsAreEnforced) {
  CoeffSeq s(3);
  EXPECT_THROW(s.set(0, 1.0), InvalidArgument);
  EXPECT_THROW(s.set(4, 1.0), InvalidArgument);
  EXPECT_THROW(CoeffSeq(-1), InvalidArgument);
  GammaSeq g(2, 2);
  EXPECT_THROW(g.set(3, 1, 1.0), InvalidArgument);
  EXPECT_THROW(g.set(1, 1, 1.5), InvalidArgument);
  s.set(2, {3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.norm(), 5.0);
}

TEST(Sequences, CsvRoundTrip) {
  std::istringstream coeffs("index,re,im\n1,1,0\n3,0,-1\n");
  const auto c = read_coeff_csv(coeffs);
  EXPECT_EQ(c.bound(), 3);
  EXPECT_EQ(c.at(3), std::complex<double>(0.0, -1.0));
  EXPECT_EQ(c.at(2), std::complex<double>());
  std::istringstream gamma("d1,d2,re,im\n2,3,0.5,0\n");
  const auto g = read_gamma_csv(gamma);
  EXPECT_EQ(g.at(2, 3), std::complex<double>(0.5, 0.0));
  std::istringstream bad_header("n,re,im\n1,1,0\n");
  EXPECT_THROW(read_coeff_csv(bad_header), InvalidArgument);
  std::istringstream bad_value("index,re,im\n1,x,0\n");
  EXPECT_THROW(read_coeff_csv(bad_value), InvalidArgument);
}

TEST(BilinearSum, Examples) {
  GammaSeq g(1, 1);
  g.set(1, 1, 1.0);
  const auto v = bilinear_s(delta(1, 1), delta(1, 1), g);
  EXPECT_NEAR(v.real(), 1.0, 1e-12);
  EXPECT_NEAR(v.imag(), 0.0, 1e-12);
}

TEST(BilinearSum, FastAndNaiveEvaluatorsAgree) {
  const auto alpha = signs(5, 1), beta = signs(5, 2);
  const auto gamma = full_gamma(10, 10, 3);
  SumTable fast_table({}, Evaluator::fast), naive_table({}, Evaluator::naive);
  EXPECT_LT(std::abs(bilinear_s(alpha, beta, gamma, fast_table) - bilinear_s(alpha, beta, gamma, naive_table)), 1e-8);
}

TEST(BilinearSum, MatchesDirectOracle) {
  const auto alpha = signs(4, 4), beta = signs(5, 5);
  const auto gamma = full_gamma(6, 6, 6);
  EXPECT_LT(std::abs(bilinear_s(alpha, beta, gamma) - bilinear_oracle(alpha, beta, gamma)), 1e-8);
  for (int e1 : {1, -1})
    for (int e2 : {1, -1})
      EXPECT_LT(std::abs(bilinear_s(alpha, beta, gamma, Signs{e1, e2}) - bilinear_oracle(alpha, beta, gamma, e1, e2)),
                1e-8)
          << e1 << " " << e2;
  EXPECT_THROW(SumTable(Signs{2, 1}), InvalidArgument);
}

TEST(BilinearSum, LinearInEachCoefficientSequence) {
  const auto a1 = signs(6, 7), a2 = signs(6, 8), beta = signs(6, 9);
  const auto gamma = full_gamma(7, 7, 10);
  CoeffSeq sum(6);
  for (Int n = 1; n <= 6; ++n) sum.set(n, 2.0 * a1.at(n) - a2.at(n));
  const auto lhs = bilinear_s(sum, beta, gamma);
  const auto rhs = 2.0 * bilinear_s(a1, beta, gamma) - bilinear_s(a2, beta, gamma);
  EXPECT_LT(std::abs(lhs - rhs), 1e-9);
}

TEST(MBeta, Examples) {
  EXPECT_DOUBLE_EQ(m_beta(delta(1, 1), 1, 1), 1.0);
  EXPECT_THROW(m_beta(delta(1, 1), 0, 1), InvalidArgument);
  EXPECT_DOUBLE_EQ(m_beta(CoeffSeq(5), 4, 4), 0.0);
}

TEST(MBeta, MatchesTripleLoopOracle) {
  const auto beta = signs(20, 11);
  EXPECT_NEAR(m_beta(beta, 5, 5), m_beta_oracle(beta, 5, 5, 5), 1e-8);
  EXPECT_NEAR(m_beta(beta, 9, 6), m_beta_oracle(beta, 9, 6, 6), 1e-8);
  for (Int Q = 1; Q <= 4; ++Q) EXPECT_NEAR(m_beta(beta, 8, 8, Q), m_beta_oracle(beta, 8, 8, Q), 1e-8);
}

TEST(MBeta, CapAtMinimumIsTheUncappedValue) {
  const auto beta = signs(12, 12);
  EXPECT_EQ(m_beta(beta, 7, 5, 5), m_beta(beta, 7, 5));
  EXPECT_EQ(m_beta(beta, 6, 6, 100), m_beta(beta, 6, 6));
}

TEST(AFunction, Examples) {
  EXPECT_EQ(a_function(1, 1, 1), 1);
  EXPECT_EQ(a_function(2, 2, 2), 3);
  EXPECT_EQ(a_function(1, 1, 6), 12);
  EXPECT_EQ(a_function(2, 3, 6), 1);
  EXPECT_EQ(a_function(6, 6, 30), 3 * 7 * 6);
  EXPECT_THROW(a_function(2, 1, 4), InvalidDivisors);
  EXPECT_THROW(a_function(4, 1, 6), InvalidDivisors);
  EXPECT_THROW(a_function(0, 1, 6), InvalidDivisors);
}

TEST(AFunction, RatioBoundedByCalibratedConstant) {
  EXPECT_LE(max_a_bound_ratio(210), calibration::kABoundConstant);
  EXPECT_DOUBLE_EQ(a_bound_ratio(1, 1, 1), 1.0);
}

TEST(MBoundExperiment, ZeroCoefficientsGiveZeroRatio) {
  // No draws: all-zero β by construction.
  SumTable table;
  const auto alpha = signs(4, 1);
  const CoeffSeq beta(4);
  const auto gamma = adversarial_gamma(alpha, beta, 4, 4, table);
  EXPECT_EQ(std::abs(bilinear_s(alpha, beta, gamma, table)), 0.0);
  EXPECT_EQ(safe_ratio(0.0, m_beta(beta, 4, 4)), 0.0);
}

TEST(MBoundExperiment, AdversarialGammaMaximizesModulus) {
  SumTable table;
  const auto alpha = signs(6, 21), beta = signs(6, 22);
  const auto gamma = adversarial_gamma(alpha, beta, 5, 5, table);
  double total_abs = 0.0;
  for (Int D1 = 1; D1 <= 5; ++D1)
    for (Int D2 = 1; D2 <= 5; ++D2) {
      EXPECT_NEAR(std::abs(gamma.at(D1, D2)), 1.0, 1e-12);
      total_abs += std::abs(inner_sum(alpha, beta, D1, D2, table));
    }
  const auto s = bilinear_s(alpha, beta, gamma, table);
  EXPECT_NEAR(s.real(), total_abs, 1e-9);
  EXPECT_NEAR(s.imag(), 0.0, 1e-9);
  EXPECT_GE(total_abs + 1e-9, std::abs(bilinear_s(alpha, beta, full_gamma(5, 5, 23), table)));
}

TEST(MBoundExperiment, GridWithinCalibration) {
  double worst_ratio = 0.0;
  for (Int N : {4, 8})
    for (Int X : {4, 6}) {
      const auto reps = theorem2_experiment(N, X, X, 4, 1);
      ASSERT_EQ(reps.size(), 4u);
      worst_ratio = std::max(worst_ratio, worst(reps)->ratio);
      for (const auto& r : reps) {
        EXPECT_GT(r.lhs, 0.0);
        EXPECT_EQ(r.rhs_components.size(), 2u);
        EXPECT_EQ(r.comparisons.size(), 3u);
      }
    }
  EXPECT_LE(worst_ratio, calibration::kMBoundMaxRatio);
}

TEST(MBoundExperiment, DeterministicForFixedSeed) {
  const auto a = theorem2_experiment(8, 6, 6, 3, 42), b = theorem2_experiment(8, 6, 6, 3, 42);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].lhs, b[i].lhs);
  const auto c = theorem2_experiment(8, 6, 6, 3, 43);
  EXPECT_NE(a[0].lhs, c[0].lhs);
  EXPECT_THROW(theorem2_experiment(0, 4, 4, 1, 1), InvalidArgument);
}

TEST(HBoundExperiment, HRangeValidated) {
  EXPECT_THROW(theorem3_experiment(4, 4, 4, 5, 1, 1, 1), InvalidHRange);
  EXPECT_THROW(theorem3_experiment(4, 4, 4, 1, 0, 1, 1), InvalidHRange);
}

TEST(HBoundExperiment, DegeneratesToMBoundForm) {
  for (Int X : {4, 6}) EXPECT_TRUE(degeneration_identity(8, X, X, 3, 1));
  const auto t3 = theorem3_experiment(8, 5, 5, 5, 5, 2, 1);
  const auto t2 = theorem2_experiment(8, 5, 5, 2, 1);
  for (std::size_t i = 0; i < t2.size(); ++i)
    EXPECT_EQ(t3[i].rhs_components[2].second, 2.0 * t2[i].rhs);
}

TEST(HBoundExperiment, UnitHKeepsOnlyTheFirstStratum) {
  const auto beta = signs(10, 31);
  EXPECT_NEAR(m_beta(beta, 6, 6, 1), m_beta_oracle(beta, 6, 6, 1), 1e-9);
  for (const auto& r : theorem3_experiment(8, 6, 6, 1, 1, 2, 1)) {
    EXPECT_LE(r.ratio, calibration::kHBoundMaxRatio);
    EXPECT_GT(r.rhs_components[3].second, r.rhs_components[2].second);
  }
}

TEST(Strata, CoprimeOnlySupportLeavesNoRemainder) {
  const auto alpha = signs(6, 41), beta = signs(6, 42);
  GammaSeq g(6, 6);
  for (Int D1 = 1; D1 <= 6; ++D1)
    for (Int D2 = 1; D2 <= 6; ++D2)
      if (std::gcd(D1, D2) == 1) g.set(D1, D2, 1.0);
  const auto r = gcd_stratification(alpha, beta, g);
  EXPECT_EQ(r.remainder, std::complex<double>());
  EXPECT_EQ(r.equal_prime, std::complex<double>());
  EXPECT_LT(std::abs(r.coprime - r.coprime_factored), kStrataTolerance);
}

TEST(Strata, EqualPrimeMatchesCaseTable) {
  const auto alpha = signs(9, 43), beta = signs(9, 44);
  for (Int p : {2, 3, 5}) {
    GammaSeq g(p, p);
    g.set(p, p, 1.0);
    const auto r = gcd_stratification(alpha, beta, g);
    std::complex<double> expected{};
    for (Int m = 1; m <= 9; ++m)
      for (Int n = 1; n <= 9; ++n) {
        const int divides = (m % p == 0) + (n % p == 0);
        const Int v = divides == 0 ? p + 1 : divides == 1 ? 1 : p * p - p + 1;
        expected += alpha.at(m) * beta.at(n) * static_cast<double>(v);
      }
    EXPECT_LT(std::abs(r.equal_prime - expected), 1e-9) << p;
    EXPECT_LT(std::abs(r.equal_prime_formula - expected), 1e-9) << p;
  }
}

TEST(Strata, AdditiveOnFullSupport) {
  const auto alpha = signs(8, 45), beta = signs(8, 46);
  const auto g = full_gamma(6, 6, 47);
  const auto r = gcd_stratification(alpha, beta, g);
  EXPECT_LT(std::abs(r.coprime + r.equal_prime + r.remainder - r.total), kStrataTolerance);
  EXPECT_LT(r.additivity_error, kStrataTolerance);
  EXPECT_LT(r.coprime_error, kStrataTolerance);
  EXPECT_LT(r.equal_prime_error, kStrataTolerance);
  EXPECT_LT(std::abs(r.total - bilinear_oracle(alpha, beta, g)), 1e-8);
}

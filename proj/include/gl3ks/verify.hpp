#pragma once

// Verification suites: each check runs an identity or inequality over a
// fixed grid and records how many points were checked, how many were skipped
// because they exceed the caps, and the first counterexample.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gl3ks/arith.hpp"
#include "gl3ks/bilinear.hpp"
#include "gl3ks/calibration.hpp"
#include "gl3ks/classical.hpp"
#include "gl3ks/gl3_sums.hpp"
#include "gl3ks/rng.hpp"
#include "gl3ks/transforms.hpp"

namespace gl3ks::verify {

struct CheckResult {
  std::string name;
  bool passed = true;
  Int checked = 0;
  Int skipped = 0;
  std::string counterexample;
  std::vector<std::pair<std::string, double>> values;  // reported quantities

  // Records one grid point; keeps the first failure.
  void record(bool ok, const std::function<std::string()>& describe) {
    ++checked;
    if (!ok && passed) {
      passed = false;
      counterexample = describe();
    }
  }
};

struct SuiteReport {
  std::string name;
  std::vector<CheckResult> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
};

struct Options {
  Caps caps;
  std::uint64_t seed = 1;
};

namespace detail {

// Runs f, counting CapExceeded as a skipped point.
template <typename F>
void guarded(CheckResult& c, F&& f) {
  try {
    f();
  } catch (const CapExceeded&) {
    ++c.skipped;
  }
}

inline std::vector<Int> units(Int D) {
  std::vector<Int> out;
  for (Int x = 0; x < D; ++x)
    if (arith::gcd(x, D) == 1) out.push_back(x);
  return out;
}

inline std::string pp(Int p, int k, Int q, int l) {
  return "(" + std::to_string(p) + "^" + std::to_string(k) + ", " + std::to_string(q) + "^" +
         std::to_string(l) + ")";
}

}  // namespace detail

// ---------------------------------------------------------------- identities

inline CheckResult check_fast_vs_naive(const Options& o, Int max_d = 24) {
  CheckResult c{"fast_equals_naive"};
  double weil = 0.0, imag = 0.0;
  for (Int m : {1, 2, 3, 5})
    for (Int n : {1, 2, 3, 5})
      for (Int D1 = 1; D1 <= max_d; ++D1)
        for (Int D2 = 1; D2 <= max_d; ++D2)
          detail::guarded(c, [&] {
            const Gl3Args a{1, m, n, 1, D1, D2};
            const CycInt naive = s_long_naive(a, o.caps);
            c.record(s_long_fast(a, o.caps) == naive, [&] { return to_string(a); });
            weil = std::max(weil, weil_ratio(a, naive));
            imag = std::max(imag, std::abs(naive.to_complex().imag()));
          });
  c.values = {{"max_weil_ratio", weil}, {"max_abs_imag", imag}};
  return c;
}

inline CheckResult check_well_definedness(const Options& o, int trials = 200) {
  CheckResult c{"well_definedness"};
  Rng rng(derive_seed(o.seed, {1}));
  auto freq = [&] {
    Int v = rng.uniform_int(1, 6);
    return rng.coin() ? v : -v;
  };
  for (int i = 0; i < trials; ++i) {
    const Gl3Args a{freq(), freq(), freq(), freq(), rng.uniform_int(1, 6), rng.uniform_int(1, 6)};
    detail::guarded(c, [&] {
      c.record(well_definedness_check(a, 1, rng, o.caps), [&] { return to_string(a); });
    });
  }
  return c;
}

/// S(1, m, n, 1; p, p) is p² - p + 1 when p | (m, n), p + 1 when p ∤ m n,
/// and 1 otherwise.
inline CheckResult check_prime_prime_table(const Options& o) {
  CheckResult c{"prime_prime_table"};
  for (Int p : {2, 3, 5})
    for (Int m = 1; m <= 2 * p; ++m)
      for (Int n = 1; n <= 2 * p; ++n)
        detail::guarded(c, [&] {
          Int expected = 1;
          if (m % p == 0 && n % p == 0) expected = p * p - p + 1;
          else if (m % p && n % p) expected = p + 1;
          const Gl3Args a{1, m, n, 1, p, p};
          c.record(s_long_naive(a, o.caps) == CycInt{expected}, [&] { return to_string(a); });
        });
  return c;
}

inline CheckResult check_prime_primepower(const Options& o) {
  CheckResult c{"prime_primepower_formula"};
  for (Int p : {2, 3, 5})
    for (int l = 1; l <= 3; ++l) {
      const Int q = arith::checked_pow(p, l);
      const std::vector<Int> vals{1, 2, p, p + 1, -1};
      for (Int m1 : vals)
        for (Int m2 : vals)
          for (Int n1 : vals)
            for (Int n2 : vals)
              detail::guarded(c, [&] {
                const Gl3Args a{m1, m2, n1, n2, p, q};
                c.record(s_prime_primepower(m1, m2, n1, n2, p, l) == s_long_naive(a, o.caps),
                         [&] { return to_string(a); });
              });
    }
  return c;
}

/// S(α, β p^b; p^c) = 0 for (αβ, p) = 1, b >= 1, c >= 2.
inline CheckResult check_classical_vanishing() {
  CheckResult c{"classical_vanishing"};
  for (Int p : {2, 3, 5})
    for (int e = 2; arith::checked_pow(p, e) <= 125; ++e) {
      const Int q = arith::checked_pow(p, e);
      for (Int alpha = 1; alpha < q; ++alpha) {
        if (alpha % p == 0) continue;
        for (Int n = p; n < q; n += p) {
          c.record(arith::classical_kloosterman(alpha, n, q).is_zero(), [&] {
            return "S(" + std::to_string(alpha) + "," + std::to_string(n) + ";" + std::to_string(q) + ")";
          });
        }
      }
    }
  return c;
}

inline CheckResult check_classical_multiplicativity() {
  CheckResult c{"classical_twisted_multiplicativity"};
  for (Int c1 = 1; c1 <= 60; ++c1)
    for (Int c2 = 1; c1 * c2 <= 60; ++c2) {
      if (arith::gcd(c1, c2) != 1) continue;
      for (Int m = 0; m < 4; ++m)
        for (Int n = 0; n < 4; ++n) {
          using arith::classical_kloosterman;
          const Int i2 = arith::inv(c2, c1), i1 = arith::inv(c1, c2);
          const CycInt rhs = classical_kloosterman(m * i2, n * i2, c1) *
                             classical_kloosterman(m * i1, n * i1, c2);
          c.record(classical_kloosterman(m, n, c1 * c2) == rhs, [&] {
            return "m=" + std::to_string(m) + " n=" + std::to_string(n) + " c=" +
                   std::to_string(c1) + "*" + std::to_string(c2);
          });
        }
    }
  return c;
}

inline CheckResult check_symmetries(const Options& o, Int max_d = 8) {
  CheckResult c{"symmetry_identities"};
  for (Int D1 = 1; D1 <= max_d; ++D1)
    for (Int D2 = 1; D2 <= max_d; ++D2)
      for (Int m1 = 1; m1 <= 3; ++m1)
        for (Int m2 = 1; m2 <= 3; ++m2)
          for (Int n1 = 1; n1 <= 3; ++n1)
            for (Int n2 = 1; n2 <= 3; ++n2)
              detail::guarded(c, [&] {
                const Gl3Args a{m1, m2, n1, n2, D1, D2};
                for (const auto& r : symmetry_identities(a, o.caps))
                  if (r.applicable) c.record(r.holds, [&] { return r.name + " at " + to_string(a); });
              });
  return c;
}

/// The identity depends on n1, n2 only modulo D1, so each residue pair is
/// checked once.
inline CheckResult check_complete_sum() {
  CheckResult c{"complete_sum_identity"};
  for (Int D1 = 1; D1 <= 20; ++D1)
    for (Int M = 1; M <= 3; ++M)
      for (Int n1 = 1; n1 <= std::min<Int>(D1, 20); ++n1)
        for (Int n2 = 1; n2 <= std::min<Int>(D1, 20); ++n2)
          c.record(complete_sum_identity_check(n1, n2, D1, M), [&] {
            return "n1=" + std::to_string(n1) + " n2=" + std::to_string(n2) + " D1=" +
                   std::to_string(D1) + " M=" + std::to_string(M);
          });
  return c;
}

inline SuiteReport identities(const Options& o) {
  return {"identities",
          {check_fast_vs_naive(o), check_well_definedness(o), check_prime_prime_table(o),
           check_prime_primepower(o), check_classical_vanishing(), check_classical_multiplicativity(),
           check_symmetries(o), check_complete_sum()}};
}

// ------------------------------------------------------------- decomposition

inline CheckResult check_decompose_reconstruction(Int max_d = 200) {
  CheckResult c{"decompose_moduli"};
  for (Int D1 = 1; D1 <= max_d; ++D1)
    for (Int D2 = 1; D2 <= max_d; ++D2) {
      bool ok = true;
      const auto d = decompose_moduli(D1, D2);
      try {
        validate_decomposition(d, D1, D2);
        const auto s = split_h(d.h1, d.h2);
        ok = s.j1 * s.k1 * s.l1 == d.h1 && s.j2 * s.k2 * s.l2 == d.h2;
      } catch (const InvalidDecomposition&) {
        ok = false;
      }
      c.record(ok, [&] { return "(" + std::to_string(D1) + ", " + std::to_string(D2) + ")"; });
    }
  return c;
}

inline CheckResult check_factor_coprime(const Options& o, Int max_d = 12) {
  CheckResult c{"factor_coprime"};
  for (Int D1 = 1; D1 <= max_d; ++D1)
    for (Int D2 = 1; D2 <= max_d; ++D2) {
      if (arith::gcd(D1, D2) != 1) continue;
      for (Int m = 1; m <= 3; ++m)
        for (Int n = 1; n <= 3; ++n)
          detail::guarded(c, [&] {
            const Gl3Args a{1, m, n, 1, D1, D2};
            c.record(factor_coprime(a).product() == s_long_naive(a, o.caps), [&] { return to_string(a); });
          });
    }
  return c;
}

inline CheckResult check_twisted_factor(const Options& o, Int max_d = 12) {
  CheckResult c{"twisted_factor"};
  for (Int D1 = 1; D1 <= max_d; ++D1)
    for (Int D2 = 1; D2 <= max_d; ++D2)
      for (Int m = 1; m <= 3; ++m)
        for (Int n = 1; n <= 3; ++n)
          detail::guarded(c, [&] {
            const Gl3Args a{1, m, n, 1, D1, D2};
            const auto f = twisted_factor(a, decompose_moduli(D1, D2), o.caps);
            c.record(f.product() == s_long_naive(a, o.caps), [&] { return to_string(a); });
          });
  return c;
}

inline CheckResult check_a_bound() {
  CheckResult c{"a_function_bound"};
  const double ratio = max_a_bound_ratio(210);
  c.record(ratio <= calibration::kABoundConstant, [&] {
    return "max ratio " + std::to_string(ratio) + " exceeds recorded constant";
  });
  c.values = {{"max_ratio", ratio}, {"constant", calibration::kABoundConstant}};
  return c;
}

inline CheckResult check_same_prime_support() {
  CheckResult c{"same_prime_support_count"};
  constexpr Int X = 10000;
  std::vector<Int> rad(X + 1, 1);
  for (Int n = 1; n <= X; ++n)
    for (const auto& f : arith::factorize(n).factors) rad[n] *= f.prime;
  for (Int q = 1; q <= 60; ++q) {
    const Int rq = rad[q];
    const Int scan = std::count(rad.begin() + 1, rad.end(), rq);
    c.record(arith::same_prime_support_count(q, X) == scan, [&] { return "q=" + std::to_string(q); });
  }
  return c;
}

inline SuiteReport decomposition(const Options& o) {
  return {"decomposition",
          {check_decompose_reconstruction(), check_factor_coprime(o), check_twisted_factor(o),
           check_a_bound(), check_same_prime_support()}};
}

// ------------------------------------------------------------------ fourier

inline CheckResult check_fourier_inversion(const Options& o, Int max_d = 6) {
  CheckResult c{"fourier_inversion"};
  for (Int D1 = 1; D1 <= max_d; ++D1)
    for (Int D2 = 1; D2 <= max_d; ++D2)
      for (Int a : detail::units(D1))
        for (Int b : detail::units(D2))
          detail::guarded(c, [&] {
            const auto bad = fourier_inversion_check(a, b, D1, D2, o.caps);
            c.record(!bad, [&] {
              return "a=" + std::to_string(a) + " b=" + std::to_string(b) + " D=(" +
                     std::to_string(D1) + "," + std::to_string(D2) + ") m=" +
                     std::to_string(bad->first) + " n=" + std::to_string(bad->second);
            });
          });
  return c;
}

inline CheckResult check_closed_forms(const Options& o) {
  CheckResult c{"shat_closed_forms"};
  for (Int p : {2, 3})
    for (int k = 0; k <= 3; ++k)
      for (int l = 0; l <= 3; ++l) {
        if (k == l && k >= 2) continue;
        const Int D1 = arith::checked_pow(p, k), D2 = arith::checked_pow(p, l);
        for (Int a : detail::units(D1))
          for (Int b : detail::units(D2))
            detail::guarded(c, [&] {
              const auto table = shat_table(a, b, D1, D2, o.caps);
              for (Int u = 0; u < D2; ++u)
                for (Int t = 0; t < D1; ++t) {
                  const ShatArgs s{a, u, t, b, D1, D2};
                  c.record(*shat_closed_form(s) == table[static_cast<std::size_t>(u * D1 + t)],
                           [&] { return to_string(s); });
                }
            });
      }
  return c;
}

/// For D1 = D2 = p^k: the parts sum to Ŝ, V_0 = 0, and when t ≡ 0 only
/// V_{k-1} (= p^{k-1}, at u ≡ 0) and V_k survive.  All (a, b) are covered for
/// p^k <= 9; for larger p^k, b = 1.
inline CheckResult check_v_decomposition(const Options& o) {
  CheckResult c{"v_decomposition"};
  for (Int p : {2, 3})
    for (int k = 2; k <= 3; ++k) {
      const Int D = arith::checked_pow(p, k);
      const auto bs = D <= 9 ? detail::units(D) : std::vector<Int>{1};
      for (Int a : detail::units(D))
        for (Int b : bs)
          detail::guarded(c, [&] {
            const auto table = shat_table(a, b, D, D, o.caps);
            for (Int u = 0; u < D; ++u)
              for (Int t = 0; t < D; ++t) {
                const ShatArgs s{a, u, t, b, D, D};
                const auto parts = v_decomposition(s, o.caps);
                CycInt sum{0};
                for (const auto& v : parts) sum += v;
                bool ok = sum == table[static_cast<std::size_t>(u * D + t)] && parts[0].is_zero();
                if (t == 0)
                  for (int k1 = 1; k1 < k; ++k1) {
                    const CycInt expected = (k1 == k - 1 && u == 0) ? CycInt{arith::checked_pow(p, k - 1)} : CycInt{0};
                    ok = ok && parts[static_cast<std::size_t>(k1)] == expected;
                  }
                c.record(ok, [&] { return to_string(s); });
              }
          });
    }
  return c;
}

inline CheckResult check_reverse_moduli(const Options& o) {
  CheckResult c{"reverse_moduli"};
  auto scan = [&](Int D1, Int D2) {
    for (Int a : detail::units(D1))
      for (Int b : detail::units(D2))
        detail::guarded(c, [&] {
          const auto lhs = shat_table(a, b, D1, D2, o.caps);
          const auto rhs = shat_table(b, a, D2, D1, o.caps);
          for (Int u = 0; u < D2; ++u)
            for (Int t = 0; t < D1; ++t)
              c.record(lhs[static_cast<std::size_t>(u * D1 + t)] == rhs[static_cast<std::size_t>(t * D2 + u)],
                       [&] { return to_string(ShatArgs{a, u, t, b, D1, D2}); });
        });
  };
  for (Int D1 = 1; D1 <= 6; ++D1)
    for (Int D2 = 1; D2 <= 6; ++D2) scan(D1, D2);
  scan(2, 9);
  scan(9, 2);
  return c;
}

inline CheckResult check_shat_factorization(const Options& o) {
  CheckResult c{"shat_factorization"};
  struct Blocks {
    Int C1, C2, E1, E2;
  };
  for (const Blocks& B : {Blocks{2, 2, 3, 3}, Blocks{4, 2, 3, 9}, Blocks{3, 3, 2, 2},
                          Blocks{2, 4, 1, 1}, Blocks{1, 1, 5, 5}, Blocks{2, 3, 5, 1}})
    for (Int a : detail::units(B.C1 * B.E1))
      for (Int u = 0; u < B.C2 * B.E2; ++u)
        for (Int t = 0; t < B.C1 * B.E1; ++t)
          detail::guarded(c, [&] {
            c.record(shat_factorization_check(a, u, t, B.C1, B.E1, B.C2, B.E2, o.caps), [&] {
              return "a=" + std::to_string(a) + " u=" + std::to_string(u) + " t=" + std::to_string(t) +
                     " C=(" + std::to_string(B.C1) + "," + std::to_string(B.C2) + ") E=(" +
                     std::to_string(B.E1) + "," + std::to_string(B.E2) + ")";
            });
          });
  return c;
}

inline SuiteReport fourier(const Options& o) {
  return {"fourier",
          {check_fourier_inversion(o), check_closed_forms(o), check_v_decomposition(o),
           check_reverse_moduli(o), check_shat_factorization(o)}};
}

// ------------------------------------------------------------------- rbound

/// R(t; C1 E1, C2 E2) = R(t; C1, C2) R(t; E1, E2) for (C1 C2, E1 E2) = 1,
/// both blocks nontrivial, D1 D2 <= max_product.
inline CheckResult check_r_multiplicativity(const Options& o, Int max_product = 36) {
  CheckResult c{"r_multiplicativity"};
  double worst = 0.0;
  std::map<std::pair<Int, Int>, RProfile> cache;
  auto profile = [&](Int D1, Int D2) -> const RProfile& {
    auto it = cache.find({D1, D2});
    if (it == cache.end()) it = cache.emplace(std::pair{D1, D2}, r_profile(D1, D2, o.caps)).first;
    return it->second;
  };
  for (Int C1 = 1; C1 <= max_product; ++C1)
    for (Int C2 = 1; C1 * C2 <= max_product; ++C2)
      for (Int E1 = 1; C1 * C2 * E1 <= max_product; ++E1)
        for (Int E2 = 1; C1 * C2 * E1 * E2 <= max_product; ++E2) {
          if (C1 * C2 == 1 || E1 * E2 == 1 || arith::gcd(C1 * C2, E1 * E2) != 1) continue;
          // each unordered split once
          if (std::pair{C1, C2} > std::pair{E1, E2}) continue;
          detail::guarded(c, [&] {
            const auto& whole = profile(C1 * E1, C2 * E2);
            const auto& left = profile(C1, C2);
            const auto& right = profile(E1, E2);
            for (Int t = 0; t < C1 * E1; ++t) {
              const double err = std::abs(whole.r[t] - left.r[t % C1] * right.r[t % E1]);
              worst = std::max(worst, err);
              c.record(err <= kRTolerance, [&] {
                return "t=" + std::to_string(t) + " C=(" + std::to_string(C1) + "," + std::to_string(C2) +
                       ") E=(" + std::to_string(E1) + "," + std::to_string(E2) + ")";
              });
            }
          });
        }
  c.values = {{"max_abs_error", worst}};
  return c;
}

/// Prime-power bound, the sharper (p, p^l) bound, both forms of the maximum,
/// R/R' duality, and the divisor-sum majorant, over p in {2, 3, 5}, k, l <= 3.
inline std::vector<CheckResult> check_rbound_grid(const Options& o) {
  CheckResult bound{"rbound_prime_power"}, sharp{"rbound_prime_by_prime_power"},
      forms{"r_alternate_form"}, dual{"r_prime_duality"}, majorant{"rbound_divisor_majorant"},
      unequal{"rbound_unequal_exponents_observed"};
  double cor = 0.0;
  Int unequal_violations = 0;
  for (Int p : {2, 3, 5})
    for (int k = 0; k <= 3; ++k)
      for (int l = 0; l <= 3; ++l) {
        RBoundReport rep;
        try {
          rep = rbound_check(p, k, l, o.caps);
        } catch (const CapExceeded&) {
          for (auto* c : {&bound, &sharp, &forms, &dual, &majorant, &unequal}) ++c->skipped;
          continue;
        }
        for (const auto& row : rep.rows) {
          auto where = [&] { return "t=" + std::to_string(row.t) + " " + detail::pp(p, k, p, l); };
          bound.record(row.holds, where);
          if (row.sharp_bound >= 0) sharp.record(row.sharp_holds, where);
          forms.record(row.alternate_agrees, where);
          dual.record(row.duality_holds, where);
          majorant.record(row.majorant_ratio <= calibration::kRDivisorMajorantConstant, where);
          cor = std::max(cor, row.majorant_ratio);
          if (row.unequal_bound >= 0) {
            ++unequal.checked;
            if (!row.unequal_holds) ++unequal_violations;
          }
        }
      }
  majorant.values = {{"max_ratio", cor}, {"constant", calibration::kRDivisorMajorantConstant}};
  unequal.values = {{"violations", static_cast<double>(unequal_violations)}};
  return {bound, sharp, forms, dual, majorant, unequal};
}

inline CheckResult check_r_prime_prime(const Options& o) {
  CheckResult c{"r_prime_prime_at_most_p"};
  for (Int p : {2, 3, 5})
    detail::guarded(c, [&] {
      const auto prof = r_profile(p, p, o.caps);
      for (Int t = 0; t < p; ++t)
        c.record(prof.r[t] <= static_cast<double>(p) + kRTolerance,
                 [&] { return "t=" + std::to_string(t) + " p=" + std::to_string(p); });
    });
  return c;
}

inline SuiteReport rbound(const Options& o) {
  SuiteReport s{"rbound", {check_r_multiplicativity(o), check_r_prime_prime(o)}};
  for (auto& c : check_rbound_grid(o)) s.checks.push_back(std::move(c));
  return s;
}

inline std::vector<SuiteReport> run(const std::string& suite, const Options& o) {
  if (suite == "identities") return {identities(o)};
  if (suite == "decomposition") return {decomposition(o)};
  if (suite == "fourier") return {fourier(o)};
  if (suite == "rbound") return {rbound(o)};
  if (suite == "all") return {identities(o), decomposition(o), fourier(o), rbound(o)};
  throw InvalidArgument("unknown suite '" + suite + "'");
}

}  // namespace gl3ks::verify

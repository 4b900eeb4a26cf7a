#pragma once

// GL(3) long-element Kloosterman sums S(m1, m2, n1, n2; D1, D2).
//
//   S = Σ e((m1 B1 + n1 (Y1 D2 - Z1 B2)) / D1) · e((m2 B2 + n2 (Y2 D1 - Z2 B1)) / D2)
//
// over B1, C1 mod D1 and B2, C2 mod D2 with (B1, C1, D1) = (B2, C2, D2) = 1
// and D1 C2 + B1 B2 + C1 D2 ≡ 0 (mod D1 D2), where Y_i B_i + Z_i C_i ≡ 1.
//
// Two evaluators are provided.  s_long_naive enumerates the defining sum.
// s_long_fast splits (D1, D2) into prime blocks with the twisted
// multiplicativity
//
//   S(m1, m2, n1, n2; D1 D1', D2 D2')
//     = S(D̄1'² D2' m1, D̄2'² D1' m2, n1, n2; D1, D2)
//     · S(D̄1² D2 m1,   D̄2² D1 m2,   n1, n2; D1', D2'),   (D1 D2, D1' D2') = 1,
//
// and evaluates each block (p^k, p^l) by a closed form when min(k, l) <= 1.

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gl3ks/arith.hpp"
#include "gl3ks/classical.hpp"
#include "gl3ks/cyclotomic.hpp"
#include "gl3ks/rng.hpp"

namespace gl3ks {

/// Work limits.  `naive` bounds the state space (D1 D2)^2 of the defining
/// sum; `order` bounds the cyclotomic order of any intermediate value.
struct Caps {
  Int naive = 100'000'000;
  Int order = kDefaultOrderCap;
};

struct Gl3Args {
  Int m1 = 1, m2 = 1, n1 = 1, n2 = 1;
  Int D1 = 1, D2 = 1;

  void validate() const {
    if (D1 < 1 || D2 < 1) throw InvalidArgument("moduli D1, D2 must be positive");
    if (m1 == 0 || m2 == 0 || n1 == 0 || n2 == 0)
      throw InvalidArgument("frequencies m1, m2, n1, n2 must be nonzero");
  }
  friend bool operator==(const Gl3Args&, const Gl3Args&) = default;
};

inline std::string to_string(const Gl3Args& a) {
  return "S(" + std::to_string(a.m1) + "," + std::to_string(a.m2) + "," + std::to_string(a.n1) +
         "," + std::to_string(a.n2) + ";" + std::to_string(a.D1) + "," + std::to_string(a.D2) + ")";
}

namespace detail {

inline void check_naive_cap(Int D1, Int D2, const Caps& caps) {
  Int state = arith::checked_mul(D1, D2);
  state = arith::checked_mul(state, state);
  if (state > caps.naive)
    throw CapExceeded("naive evaluation of moduli (" + std::to_string(D1) + ", " +
                      std::to_string(D2) + ") needs state space " + std::to_string(state) +
                      " > cap " + std::to_string(caps.naive));
  if (D1 * D2 > caps.order)
    throw OrderOverflow("cyclotomic order " + std::to_string(D1 * D2) + " exceeds cap " +
                        std::to_string(caps.order));
}

/// One solution (Y, Z) of Y B + Z C ≡ 1 (mod D), assuming (B, C, D) = 1.
inline std::pair<Int, Int> solve_yz(Int B, Int C, Int D) {
  if (D == 1) return {0, 0};
  auto [g, y, z] = arith::extended_gcd(B, C);
  if (g == 0) throw InvalidArgument("solve_yz: (B, C, D) != 1");
  Int gi = arith::inv(g, D);
  return {arith::mulmod(y, gi, D), arith::mulmod(z, gi, D)};
}

/// A term of the defining sum, with reduced representatives in [0, D).
struct Tuple {
  Int B1, C1, B2, C2;
  Int Y1, Z1, Y2, Z2;
};

/// Visits every (B1, C1, B2, C2) of the defining sum once.  For fixed
/// (B1, C1) the congruence forces D1 | B1 B2 + C1 D2, a condition on B2 mod
/// D1/(B1, D1), and then determines C2 mod D2 uniquely.  When `fixed_b2` is
/// nonnegative only tuples with B2 = fixed_b2 are visited.
template <typename F>
void for_each_tuple(Int D1, Int D2, F&& f, Int fixed_b2 = -1) {
  for (Int B1 = 0; B1 < D1; ++B1) {
    for (Int C1 = 0; C1 < D1; ++C1) {
      if (arith::gcd(arith::gcd(B1, C1), D1) != 1) continue;
      const auto [Y1, Z1] = solve_yz(B1, C1, D1);
      // B1 B2 ≡ -C1 D2 (mod D1)
      const Int g = arith::gcd(B1, D1);
      const Int rhs = arith::mod(-arith::mulmod(C1, D2, D1), D1);
      if (rhs % g != 0) continue;
      const Int step = D1 / g;
      const Int b2_0 = step == 1 ? 0 : arith::mulmod(rhs / g, arith::inv(B1 / g, step), step);
      Int start = b2_0, stop = D2;
      if (fixed_b2 >= 0) {
        if (arith::mod(fixed_b2 - b2_0, step) != 0) continue;
        start = fixed_b2;
        stop = fixed_b2 + 1;
      }
      for (Int B2 = start; B2 < stop; B2 += step) {
        const Int w = B1 * B2 + C1 * D2;  // divisible by D1
        const Int C2 = arith::mod(-(w / D1), D2);
        if (arith::gcd(arith::gcd(B2, C2), D2) != 1) continue;
        const auto [Y2, Z2] = solve_yz(B2, C2, D2);
        f(Tuple{B1, C1, B2, C2, Y1, Z1, Y2, Z2});
      }
    }
  }
}

/// Exponent of the term's phase over the common denominator D1 D2.
struct PhaseKernel {
  Int m1, m2, n1, n2, D1, D2;

  PhaseKernel(Int m1_, Int m2_, Int n1_, Int n2_, Int D1_, Int D2_)
      : m1(arith::mod(m1_, D1_)), m2(arith::mod(m2_, D2_)), n1(arith::mod(n1_, D1_)),
        n2(arith::mod(n2_, D2_)), D1(D1_), D2(D2_) {}

  Int operator()(const Tuple& t) const {
    const Int p1 = arith::mod(m1 * t.B1 + n1 * arith::mod(t.Y1 * D2 - t.Z1 * t.B2, D1), D1);
    const Int p2 = arith::mod(m2 * t.B2 + n2 * arith::mod(t.Y2 * D1 - t.Z2 * t.B1, D2), D2);
    return p1 * D2 + p2 * D1;
  }
};

/// Defining sum; zero frequencies allowed.
inline CycInt s_naive_raw(Int m1, Int m2, Int n1, Int n2, Int D1, Int D2, const Caps& caps) {
  check_naive_cap(D1, D2, caps);
  const Int L = D1 * D2;
  PhaseAccumulator acc(L);
  PhaseKernel phase(m1, m2, n1, n2, D1, D2);
  for_each_tuple(D1, D2, [&](const Tuple& t) { acc.add(phase(t)); });
  return acc.value();
}

}  // namespace detail

/// The defining sum, enumerated term by term.
inline CycInt s_long_naive(const Gl3Args& args, const Caps& caps = {}) {
  args.validate();
  return detail::s_naive_raw(args.m1, args.m2, args.n1, args.n2, args.D1, args.D2, caps);
}

/// Re-evaluates the defining sum `trials` times with randomized coset
/// representatives for B_i, C_i (B -> B + r D) and randomized solutions
/// (Y_i, Z_i); true iff every trial equals s_long_naive exactly.
inline bool well_definedness_check(const Gl3Args& args, int trials, Rng& rng,
                                   const Caps& caps = {}) {
  args.validate();
  const CycInt reference = s_long_naive(args, caps);
  const Int D1 = args.D1, D2 = args.D2, L = D1 * D2;

  auto random_yz = [&](Int B, Int C, Int D) -> std::pair<Int, Int> {
    if (D == 1) return {rng.uniform_int(-3, 3), rng.uniform_int(-3, 3)};
    const Int g = arith::gcd(C, D);
    for (;;) {
      Int Y = rng.uniform_int(0, D - 1);
      Int r = arith::mod(1 - arith::mulmod(Y, B, D), D);
      if (r % g != 0) continue;
      Int step = D / g;
      Int Z = step == 1 ? 0 : arith::mulmod(r / g, arith::inv(arith::mod(C, D) / g, step), step);
      Z += step * rng.uniform_int(0, g - 1);
      return {Y + D * rng.uniform_int(-2, 2), Z + D * rng.uniform_int(-2, 2)};
    }
  };

  for (int trial = 0; trial < trials; ++trial) {
    std::vector<Int> b1(D1), c1(D1), b2(D2), c2(D2);
    for (Int x = 0; x < D1; ++x) {
      b1[x] = x + D1 * rng.uniform_int(-3, 3);
      c1[x] = x + D1 * rng.uniform_int(-3, 3);
    }
    for (Int x = 0; x < D2; ++x) {
      b2[x] = x + D2 * rng.uniform_int(-3, 3);
      c2[x] = x + D2 * rng.uniform_int(-3, 3);
    }
    PhaseAccumulator acc(L);
    for (Int x1 = 0; x1 < D1; ++x1)
      for (Int y1 = 0; y1 < D1; ++y1) {
        if (arith::gcd(arith::gcd(x1, y1), D1) != 1) continue;
        const Int B1 = b1[x1], C1 = c1[y1];
        for (Int x2 = 0; x2 < D2; ++x2)
          for (Int y2 = 0; y2 < D2; ++y2) {
            if (arith::gcd(arith::gcd(x2, y2), D2) != 1) continue;
            const Int B2 = b2[x2], C2 = c2[y2];
            if (arith::mod(D1 * C2 + B1 * B2 + C1 * D2, L) != 0) continue;
            auto [Y1, Z1] = random_yz(B1, C1, D1);
            auto [Y2, Z2] = random_yz(B2, C2, D2);
            const Int p1 = arith::mod(args.m1 * B1 + args.n1 * (Y1 * D2 - Z1 * B2), D1);
            const Int p2 = arith::mod(args.m2 * B2 + args.n2 * (Y2 * D1 - Z2 * B1), D2);
            acc.add(p1 * D2 + p2 * D1);
          }
      }
    if (!(acc.value() == reference)) return false;
  }
  return true;
}

/// The two GL(2) factors of a coprime-moduli sum:
/// S(m1, m2, n1, n2; D1, D2) = S(D2 m1, n1; D1) · S(D1 m2, n2; D2).
struct ClassicalPair {
  CycInt first;   // S(D2 m1, n1; D1)
  CycInt second;  // S(D1 m2, n2; D2)
  CycInt product() const { return first * second; }
};

inline ClassicalPair factor_coprime(const Gl3Args& args) {
  args.validate();
  if (arith::gcd(args.D1, args.D2) != 1)
    throw ModuliNotCoprime("factor_coprime: gcd(D1, D2) = " +
                           std::to_string(arith::gcd(args.D1, args.D2)));
  return {arith::classical_kloosterman(arith::mulmod(args.D2, args.m1, args.D1), args.n1, args.D1),
          arith::classical_kloosterman(arith::mulmod(args.D1, args.m2, args.D2), args.n2, args.D2)};
}

/// Closed form for moduli (p, p^l), l >= 1:
/// S(n1, 0; p) S(m2, n2 p; p^l) + S(m1, 0; p) S(n2, m2 p; p^l) + δ_{l=1} (p - 1).
/// Zero frequencies are allowed.
inline CycInt s_prime_primepower(Int m1, Int m2, Int n1, Int n2, Int p, int l) {
  if (!arith::is_prime(p)) throw InvalidArgument("s_prime_primepower: p must be prime");
  if (l < 1) throw InvalidArgument("s_prime_primepower: l must be >= 1");
  const Int q = arith::checked_pow(p, l);
  using arith::classical_kloosterman;
  using arith::mulmod;
  CycInt out = classical_kloosterman(n1, 0, p) * classical_kloosterman(m2, mulmod(n2, p, q), q) +
               classical_kloosterman(m1, 0, p) * classical_kloosterman(n2, mulmod(m2, p, q), q);
  if (l == 1) out += CycInt{p - 1};
  return out;
}

namespace detail {

// One prime block (p^k, p^l) of the fast evaluator.
inline CycInt eval_block(Int m1, Int m2, Int n1, Int n2, Int p, int k, int l, const Caps& caps) {
  const Int P1 = arith::checked_pow(p, k), P2 = arith::checked_pow(p, l);
  if (k == 0 && l == 0) return CycInt{1};
  if (k == 0) return arith::classical_kloosterman(m2, n2, P2);
  if (l == 0) return arith::classical_kloosterman(m1, n1, P1);
  if (k == 1) return s_prime_primepower(m1, m2, n1, n2, p, l);
  // S(m1, m2, n1, n2; D1, D2) = S(m2, m1, n2, n1; D2, D1)
  if (l == 1) return s_prime_primepower(m2, m1, n2, n1, p, k);
  return s_naive_raw(m1, m2, n1, n2, P1, P2, caps);
}

// Twisted arguments of the (D1, D2) factor when splitting off (R1, R2).
inline std::array<Int, 4> twist(Int m1, Int m2, Int n1, Int n2, Int D1, Int D2, Int R1, Int R2) {
  using arith::mulmod;
  Int r1 = arith::inv(R1, D1), r2 = arith::inv(R2, D2);
  Int a1 = mulmod(mulmod(mulmod(r1, r1, D1), R2, D1), m1, D1);
  Int a2 = mulmod(mulmod(mulmod(r2, r2, D2), R1, D2), m2, D2);
  return {a1, a2, arith::mod(n1, D1), arith::mod(n2, D2)};
}

inline CycInt s_fast_raw(Int m1, Int m2, Int n1, Int n2, Int D1, Int D2, const Caps& caps) {
  std::map<Int, std::pair<int, int>> blocks;
  for (const auto& f : arith::factorize(D1).factors) blocks[f.prime].first = f.exponent;
  for (const auto& f : arith::factorize(D2).factors) blocks[f.prime].second = f.exponent;
  CycInt out{1};
  Int rest1 = D1, rest2 = D2;
  Int a1 = m1, a2 = m2, b1 = n1, b2 = n2;
  for (const auto& [p, kl] : blocks) {
    const auto [k, l] = kl;
    const Int P1 = arith::checked_pow(p, k), P2 = arith::checked_pow(p, l);
    const Int R1 = rest1 / P1, R2 = rest2 / P2;
    auto blk = twist(a1, a2, b1, b2, P1, P2, R1, R2);
    out = CycInt::mul(out, eval_block(blk[0], blk[1], blk[2], blk[3], p, k, l, caps), caps.order);
    if (R1 * R2 == 1) break;
    auto rem = twist(a1, a2, b1, b2, R1, R2, P1, P2);
    a1 = rem[0];
    a2 = rem[1];
    b1 = rem[2];
    b2 = rem[3];
    rest1 = R1;
    rest2 = R2;
  }
  return out;
}

}  // namespace detail

/// Structured evaluator: prime blocks via twisted multiplicativity, closed
/// forms where min(k, l) <= 1, the defining sum on the remaining blocks.
inline CycInt s_long_fast(const Gl3Args& args, const Caps& caps = {}) {
  args.validate();
  return detail::s_fast_raw(args.m1, args.m2, args.n1, args.n2, args.D1, args.D2, caps);
}

/// D1 = q h1 E1, D2 = q h2 E2 with g_i = q h_i.
struct ModuliDecomposition {
  Int q = 1, h1 = 1, h2 = 1, E1 = 1, E2 = 1;
  Int g1() const { return q * h1; }
  Int g2() const { return q * h2; }
  friend bool operator==(const ModuliDecomposition&, const ModuliDecomposition&) = default;
};

/// Throws InvalidDecomposition unless `d` is the decomposition of (D1, D2).
inline void validate_decomposition(const ModuliDecomposition& d, Int D1, Int D2) {
  auto fail = [](const std::string& why) { throw InvalidDecomposition("decomposition: " + why); };
  if (d.q < 1 || d.h1 < 1 || d.h2 < 1 || d.E1 < 1 || d.E2 < 1) fail("components must be positive");
  if (d.q * d.h1 * d.E1 != D1 || d.q * d.h2 * d.E2 != D2) fail("product does not match moduli");
  if (arith::gcd(d.E1 * d.E2, d.q * d.h1 * d.h2) != 1) fail("(E1 E2, q h1 h2) != 1");
  if (arith::gcd(d.E1, d.E2) != 1) fail("(E1, E2) != 1");
  if (!arith::is_squarefree(d.q)) fail("q not squarefree");
  if (arith::gcd(d.q, d.h1 * d.h2) != 1) fail("(q, h1 h2) != 1");
  for (const auto& f : arith::factorize(d.h1 * d.h2).factors) {
    int a = arith::factorize(d.h1).exponent_of(f.prime);
    int b = arith::factorize(d.h2).exponent_of(f.prime);
    if ((a >= 1) != (b >= 1)) fail("h1, h2 have different prime support");
    if (a < 2 && b < 2) fail("prime of h1 h2 with both exponents 1");
  }
}

/// Splits off E1, E2 (primes dividing only one modulus), q (primes dividing
/// both exactly once) and h1, h2 (the remaining common primes).
inline ModuliDecomposition decompose_moduli(Int D1, Int D2) {
  if (D1 < 1 || D2 < 1) throw InvalidArgument("decompose_moduli: moduli must be positive");
  ModuliDecomposition d;
  auto f1 = arith::factorize(D1), f2 = arith::factorize(D2);
  std::map<Int, std::pair<int, int>> e;
  for (const auto& f : f1.factors) e[f.prime].first = f.exponent;
  for (const auto& f : f2.factors) e[f.prime].second = f.exponent;
  for (const auto& [p, kl] : e) {
    const auto [k, l] = kl;
    const Int pk = arith::checked_pow(p, k), pl = arith::checked_pow(p, l);
    if (l == 0)
      d.E1 *= pk;
    else if (k == 0)
      d.E2 *= pl;
    else if (k == 1 && l == 1)
      d.q *= p;
    else {
      d.h1 *= pk;
      d.h2 *= pl;
    }
  }
  return d;
}

/// The split h1 = j1 k1 l1, h2 = j2 k2 l2 by exponent pattern at each prime:
/// j: exponent 1 in h1 and >= 2 in h2; k: >= 2 in h1 and 1 in h2; l: >= 2 in both.
struct HSplit {
  Int j1 = 1, k1 = 1, l1 = 1;
  Int j2 = 1, k2 = 1, l2 = 1;
};

inline HSplit split_h(Int h1, Int h2) {
  HSplit s;
  auto f1 = arith::factorize(h1), f2 = arith::factorize(h2);
  if (f1.factors.size() != f2.factors.size())
    throw InvalidDecomposition("split_h: h1 and h2 must share their prime support");
  for (std::size_t i = 0; i < f1.factors.size(); ++i) {
    const auto a = f1.factors[i], b = f2.factors[i];
    if (a.prime != b.prime)
      throw InvalidDecomposition("split_h: h1 and h2 must share their prime support");
    const Int pa = arith::checked_pow(a.prime, a.exponent), pb = arith::checked_pow(b.prime, b.exponent);
    if (a.exponent == 1 && b.exponent >= 2) {
      s.j1 *= pa;
      s.j2 *= pb;
    } else if (a.exponent >= 2 && b.exponent == 1) {
      s.k1 *= pa;
      s.k2 *= pb;
    } else if (a.exponent >= 2 && b.exponent >= 2) {
      s.l1 *= pa;
      s.l2 *= pb;
    } else {
      throw InvalidDecomposition("split_h: prime with exponent 1 in both h1 and h2");
    }
  }
  return s;
}

/// The two twisted sums over (E1, E2) and (g1, g2) whose product is
/// S(m1, m2, n1, n2; D1, D2); both evaluated by the defining sum.
struct TwistedFactors {
  CycInt e_factor;
  CycInt g_factor;
  CycInt product() const { return e_factor * g_factor; }
};

inline TwistedFactors twisted_factor(const Gl3Args& args, const ModuliDecomposition& d,
                                     const Caps& caps = {}) {
  args.validate();
  validate_decomposition(d, args.D1, args.D2);
  const Int g1 = d.g1(), g2 = d.g2();
  auto e = detail::twist(args.m1, args.m2, args.n1, args.n2, d.E1, d.E2, g1, g2);
  auto g = detail::twist(args.m1, args.m2, args.n1, args.n2, g1, g2, d.E1, d.E2);
  return {detail::s_naive_raw(e[0], e[1], e[2], e[3], d.E1, d.E2, caps),
          detail::s_naive_raw(g[0], g[1], g[2], g[3], g1, g2, caps)};
}

struct IdentityResult {
  std::string name;
  bool applicable = false;
  bool holds = false;
  std::string detail;
};

/// Checks the symmetry and unit-scaling identities of the long-element sum
/// on `args` by evaluating both sides with the defining sum:
///   swap_frequencies : S(m1, m2, n1, n2; D1, D2) = S(n1, n2, m1, m2; D1, D2)
///   swap_moduli      : S(m1, m2, n1, n2; D1, D2) = S(m2, m1, n2, n1; D2, D1)
///   unit_first       : S(a, y, x, 1; D1, D2) = S(1, y, a x, 1; D1, D2),   (a, D1) = 1
///   unit_last        : S(1, x, y, a; D1, D2) = S(1, a x, y, 1; D1, D2),   (a, D2) = 1
inline std::vector<IdentityResult> symmetry_identities(const Gl3Args& args, const Caps& caps = {}) {
  args.validate();
  const auto& a = args;
  auto S = [&](Int m1, Int m2, Int n1, Int n2, Int D1, Int D2) {
    return detail::s_naive_raw(m1, m2, n1, n2, D1, D2, caps);
  };
  const CycInt lhs = S(a.m1, a.m2, a.n1, a.n2, a.D1, a.D2);
  std::vector<IdentityResult> out;
  out.push_back({"swap_frequencies", true, lhs == S(a.n1, a.n2, a.m1, a.m2, a.D1, a.D2), ""});
  out.push_back({"swap_moduli", true, lhs == S(a.m2, a.m1, a.n2, a.n1, a.D2, a.D1), ""});
  {
    IdentityResult r{"unit_first", a.n2 == 1 && arith::gcd(a.m1, a.D1) == 1, false, ""};
    if (r.applicable) r.holds = lhs == S(1, a.m2, a.m1 * a.n1, 1, a.D1, a.D2);
    out.push_back(r);
  }
  {
    IdentityResult r{"unit_last", a.m1 == 1 && arith::gcd(a.n2, a.D2) == 1, false, ""};
    if (r.applicable) r.holds = lhs == S(1, a.n2 * a.m2, a.n1, 1, a.D1, a.D2);
    out.push_back(r);
  }
  return out;
}

/// Σ_{D2 <= M D1} S(n1, D2; D1) S(n2, D2; D1) = M D1 c_{D1}(n1 - n2), exactly.
inline bool complete_sum_identity_check(Int n1, Int n2, Int D1, Int M) {
  if (D1 < 1 || M < 1) throw InvalidArgument("complete_sum_identity_check: D1, M must be >= 1");
  CycInt lhs{0};
  for (Int d2 = 1; d2 <= M * D1; ++d2)
    lhs += arith::classical_kloosterman(n1, d2, D1) * arith::classical_kloosterman(n2, d2, D1);
  CycInt rhs = arith::ramanujan_sum(n1 - n2, D1).scaled(M * D1);
  return lhs == rhs;
}

/// |S| divided by the Weil-type majorant
/// (D1 D2)^{1/2} ((D1, D2) (m1 n2, [D1, D2]) (m2 n1, [D1, D2]))^{1/2}.
inline double weil_ratio(const Gl3Args& a, const CycInt& value) {
  const Int l = arith::lcm(a.D1, a.D2);
  const double bound =
      std::sqrt(static_cast<double>(a.D1 * a.D2)) *
      std::sqrt(static_cast<double>(arith::gcd(a.D1, a.D2)) *
                static_cast<double>(arith::gcd(arith::mulmod(a.m1, a.n2, l), l)) *
                static_cast<double>(arith::gcd(arith::mulmod(a.m2, a.n1, l), l)));
  return std::abs(value.to_complex()) / bound;
}

}  // namespace gl3ks

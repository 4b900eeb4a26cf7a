#pragma once

// Partial Fourier transform of the long-element sum in its two middle
// arguments,
//
//   Ŝ(a, u, t, b; D1, D2) = (D1 D2)^{-1} Σ_{x mod D1} Σ_{y mod D2}
//                            S(a, y, x, b; D1, D2) e(-x t / D1) e(-y u / D2),
//
// and the majorants built from it:
//
//   R(t; D1, D2)  = max_{(ab, D1) = 1} Σ_{u mod D2} |Ŝ(a, u, b t, 1; D1, D2)|
//   R'(u; D1, D2) = max_{(a, D1) = (b, D2) = 1} Σ_{t mod D1} |Ŝ(a, b u, t, 1; D1, D2)|.
//
// Summing the definition over x and y by orthogonality leaves the terms of
// the defining sum of S with B2 ≡ u (mod D2) and Y1 D2 - Z1 B2 ≡ t (mod D1):
//
//   Ŝ = Σ e(a B1 / D1) e(b (Y2 D1 - Z2 B1) / D2),
//
// so Ŝ is an algebraic integer and is evaluated that way here.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gl3ks/arith.hpp"
#include "gl3ks/classical.hpp"
#include "gl3ks/cyclotomic.hpp"
#include "gl3ks/gl3_sums.hpp"

namespace gl3ks {

struct ShatArgs {
  Int a = 1, u = 0, t = 0, b = 1;
  Int D1 = 1, D2 = 1;

  void validate() const {
    if (D1 < 1 || D2 < 1) throw InvalidArgument("moduli D1, D2 must be positive");
    if (arith::gcd(a, D1) != 1 || arith::gcd(b, D2) != 1)
      throw CoprimalityViolated("Ŝ requires (a, D1) = (b, D2) = 1");
  }
  friend bool operator==(const ShatArgs&, const ShatArgs&) = default;
};

inline std::string to_string(const ShatArgs& s) {
  return "Shat(" + std::to_string(s.a) + "," + std::to_string(s.u) + "," + std::to_string(s.t) +
         "," + std::to_string(s.b) + ";" + std::to_string(s.D1) + "," + std::to_string(s.D2) + ")";
}

namespace detail {

// Residue of Y1 D2 - Z1 B2 modulo D1 for a term of the defining sum.
inline Int shat_t_index(const Tuple& x, Int D1, Int D2) {
  return arith::mod(x.Y1 * D2 - x.Z1 * x.B2, D1);
}

// Exponent in [0, D1 D2) of e(a B1 / D1) e(b (Y2 D1 - Z2 B1) / D2).
inline Int shat_phase(const Tuple& x, Int a, Int b, Int D1, Int D2) {
  const Int p1 = arith::mulmod(a, x.B1, D1);
  const Int p2 = arith::mulmod(b, arith::mod(x.Y2 * D1 - x.Z2 * x.B1, D2), D2);
  return (p1 * D2 + p2 * D1) % (D1 * D2);
}

}  // namespace detail

/// Exact Ŝ, summing only the terms of the defining sum that survive the
/// transform.
inline CycInt shat_naive(const ShatArgs& s, const Caps& caps = {}) {
  s.validate();
  detail::check_naive_cap(s.D1, s.D2, caps);
  const Int u = arith::mod(s.u, s.D2), t = arith::mod(s.t, s.D1);
  PhaseAccumulator acc(s.D1 * s.D2);
  detail::for_each_tuple(
      s.D1, s.D2,
      [&](const detail::Tuple& x) {
        if (detail::shat_t_index(x, s.D1, s.D2) == t)
          acc.add(detail::shat_phase(x, s.a, s.b, s.D1, s.D2));
      },
      u);
  return acc.value();
}

/// Ŝ straight from the transform definition: the D1 D2 sums S(a, y, x, b)
/// twisted by e(-x t / D1 - y u / D2), then divided by D1 D2.
inline CycInt shat_by_definition(const ShatArgs& s, const Caps& caps = {}) {
  s.validate();
  const Int D1 = s.D1, D2 = s.D2, L = D1 * D2;
  CycInt total{0};
  for (Int x = 0; x < D1; ++x)
    for (Int y = 0; y < D2; ++y) {
      const CycInt term = detail::s_naive_raw(s.a, y, x, s.b, D1, D2, caps);
      const Int twist = arith::mod(-(x * s.t % D1) * D2 - (y * s.u % D2) * D1, L);
      total = CycInt::add(total, CycInt::mul(term, CycInt::root_of_unity(twist, L), caps.order),
                          caps.order);
    }
  return total.divide_exact(L);
}

/// All Ŝ(a, u, t, b) for fixed (a, b), indexed [u * D1 + t].
inline std::vector<CycInt> shat_table(Int a, Int b, Int D1, Int D2, const Caps& caps = {}) {
  ShatArgs{a, 0, 0, b, D1, D2}.validate();
  detail::check_naive_cap(D1, D2, caps);
  const Int L = D1 * D2;
  std::vector<std::vector<Int>> counts(static_cast<std::size_t>(L));
  detail::for_each_tuple(D1, D2, [&](const detail::Tuple& x) {
    auto& c = counts[static_cast<std::size_t>(x.B2 * D1 + detail::shat_t_index(x, D1, D2))];
    if (c.empty()) c.assign(static_cast<std::size_t>(L), 0);
    ++c[static_cast<std::size_t>(detail::shat_phase(x, a, b, D1, D2))];
  });
  std::vector<CycInt> out(static_cast<std::size_t>(L));
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!counts[i].empty()) out[i] = CycInt::from_exponent_counts(L, std::move(counts[i]));
  return out;
}

/// Floating-point version of shat_table; no order cap applies.
inline std::vector<std::complex<double>> shat_table_float(Int a, Int b, Int D1, Int D2,
                                                          const Caps& caps = {}) {
  ShatArgs{a, 0, 0, b, D1, D2}.validate();
  Int state = arith::checked_mul(D1, D2);
  if (arith::checked_mul(state, state) > caps.naive)
    throw CapExceeded("Ŝ table for moduli (" + std::to_string(D1) + ", " + std::to_string(D2) +
                      ") exceeds cap " + std::to_string(caps.naive));
  const Int L = D1 * D2;
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(L));
  for (Int k = 0; k < L; ++k)
    roots[static_cast<std::size_t>(k)] =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(L));
  std::vector<std::complex<double>> out(static_cast<std::size_t>(L));
  detail::for_each_tuple(D1, D2, [&](const detail::Tuple& x) {
    out[static_cast<std::size_t>(x.B2 * D1 + detail::shat_t_index(x, D1, D2))] +=
        roots[static_cast<std::size_t>(detail::shat_phase(x, a, b, D1, D2))];
  });
  return out;
}

/// Closed-form Ŝ for D1 = p^k, D2 = p^l.  Returns nullopt when k = l >= 2,
/// where no closed form is known.
inline std::optional<CycInt> shat_closed_form(const ShatArgs& s) {
  s.validate();
  const auto f1 = arith::as_prime_power(s.D1), f2 = arith::as_prime_power(s.D2);
  if (f1.exponent < 0 || f2.exponent < 0 || (f1.exponent > 0 && f2.exponent > 0 && f1.prime != f2.prime))
    throw NotPrimePower("shat_closed_form: moduli must be powers of one prime");
  const Int p = f1.exponent > 0 ? f1.prime : f2.prime;
  const int k = f1.exponent, l = f2.exponent;
  const Int t = arith::mod(s.t, s.D1), u = arith::mod(s.u, s.D2);
  const Int a = arith::mod(s.a, s.D1), b = arith::mod(s.b, s.D2);
  auto e = [](Int x, Int n) { return CycInt::root_of_unity(x, n); };
  using arith::checked_pow;
  using arith::inv;
  using arith::mulmod;

  if (k == 0 && l == 0) return CycInt{1};
  if (k == 0) return u % p ? e(mulmod(inv(u, s.D2), b, s.D2), s.D2) : CycInt{0};
  if (l == 0) return t % p ? e(mulmod(inv(t, s.D1), a, s.D1), s.D1) : CycInt{0};
  if (k == 1 && l == 1) {
    if (t % p && u % p) return CycInt{1};
    if (t % p == 0 && u % p == 0) return CycInt{p};
    return CycInt{0};
  }
  if (k == 1) {
    if (t % p == 0 || u % p == 0) return CycInt{0};
    return e(mulmod(inv(u, s.D2), b, s.D2 / p), s.D2 / p);
  }
  if (l == 1) {
    if (t % p == 0 || u % p == 0) return CycInt{0};
    return e(mulmod(inv(t, s.D1), a, s.D1 / p), s.D1 / p);
  }
  if (k == l) return std::nullopt;

  // Both exponents >= 2.  With (x, X, kx) the argument whose modulus is the
  // smaller power and (y, Y, ky) the other, the transform vanishes unless
  // ν(x) = ν(y) = ν with 2ν <= kx, and then equals
  //   p^ν e(Y-coefficient · ȳ' / p^{ky-kx+ν}) e(X-coefficient · x̄' p^{ky-kx} / p^ν)
  //       · S(X-coefficient, Y-coefficient · (x' y')^-1; p^ν).
  const bool first_small = k < l;
  const Int x = first_small ? t : u, y = first_small ? u : t;
  const Int xc = first_small ? a : b, yc = first_small ? b : a;
  const Int xmod = first_small ? s.D1 : s.D2, ymod = first_small ? s.D2 : s.D1;
  const int kx = std::min(k, l), ky = std::max(k, l);
  const int nu = arith::nu_p(arith::ResidueClass{x, xmod}, p);
  if (2 * nu > kx || arith::nu_p(arith::ResidueClass{y, ymod}, p) != nu) return CycInt{0};
  const Int pn = checked_pow(p, nu);
  const Int xp = x / pn, yp = y / pn;
  const Int m1 = checked_pow(p, ky - kx + nu);
  const Int shift = checked_pow(p, ky - kx);
  CycInt out = e(mulmod(yc, inv(yp, m1), m1), m1) *
               e(mulmod(mulmod(xc, inv(xp, pn), pn), shift, pn), pn) *
               arith::classical_kloosterman(xc, mulmod(yc, inv(mulmod(xp, yp, pn), pn), pn), pn);
  return out.scaled(pn);
}

/// Splits Ŝ(a, u, t, b; p^k, p^k) by ν_p(B1): entry k1 is the subsum over
/// terms with p^{k1} || B1 (B1 ≡ 0 counted at k1 = k).
inline std::vector<CycInt> v_decomposition(const ShatArgs& s, const Caps& caps = {}) {
  s.validate();
  const auto f = arith::as_prime_power(s.D1);
  if (s.D1 != s.D2 || f.exponent < 2)
    throw NotPrimePower("v_decomposition: needs D1 = D2 = p^k with k >= 2");
  detail::check_naive_cap(s.D1, s.D2, caps);
  const Int D = s.D1, L = D * D, p = f.prime;
  const int k = f.exponent;
  const Int u = arith::mod(s.u, D), t = arith::mod(s.t, D);
  std::vector<PhaseAccumulator> parts(static_cast<std::size_t>(k + 1), PhaseAccumulator(L));
  detail::for_each_tuple(
      D, D,
      [&](const detail::Tuple& x) {
        if (detail::shat_t_index(x, D, D) != t) return;
        const int k1 = arith::nu_p(arith::ResidueClass{x.B1, D}, p);
        parts[static_cast<std::size_t>(k1)].add(detail::shat_phase(x, s.a, s.b, D, D));
      },
      u);
  std::vector<CycInt> out;
  out.reserve(parts.size());
  for (auto& acc : parts) out.push_back(acc.value());
  return out;
}

/// Checks the block factorization of Ŝ over coprime moduli pairs:
///   Ŝ(a, u, t, 1; C1 E1, C2 E2)
///     = Ŝ(Ē1² E2 a, u E2 Ē1, t Ē1, 1; C1, C2) · Ŝ(C̄1² C2 a, u C2 C̄1, t C̄1, 1; E1, E2),
/// with Ē1 inverted modulo C1 C2 and C̄1 modulo E1 E2.
inline bool shat_factorization_check(Int a, Int u, Int t, Int C1, Int E1, Int C2, Int E2,
                                     const Caps& caps = {}) {
  if (arith::gcd(C1 * C2, E1 * E2) != 1)
    throw ModuliNotCoprime("shat_factorization_check: (C1 C2, E1 E2) != 1");
  using arith::inv;
  using arith::mulmod;
  const Int iE = inv(E1, C1 * C2), iC = inv(C1, E1 * E2);
  const Int eC = inv(E1, C1), cE = inv(C1, E1);
  const ShatArgs lhs{a, u, t, 1, C1 * E1, C2 * E2};
  const ShatArgs left{mulmod(mulmod(eC, eC, C1), mulmod(E2, a, C1), C1),
                      mulmod(mulmod(u, E2, C2), iE, C2), mulmod(t, iE, C1), 1, C1, C2};
  const ShatArgs right{mulmod(mulmod(cE, cE, E1), mulmod(C2, a, E1), E1),
                       mulmod(mulmod(u, C2, E2), iC, E2), mulmod(t, iC, E1), 1, E1, E2};
  return shat_naive(lhs, caps) == shat_naive(left, caps) * shat_naive(right, caps);
}

/// Ŝ(a, u, t, b; D1, D2) = Ŝ(b, t, u, a; D2, D1).
inline bool reverse_moduli_check(const ShatArgs& s, const Caps& caps = {}) {
  return shat_naive(s, caps) == shat_naive({s.b, s.t, s.u, s.a, s.D2, s.D1}, caps);
}

/// Rebuilds every S(a, m, n, b; D1, D2) from the table of Ŝ(a, ·, ·, b) by
/// Σ_{t, u} e(t n / D1 + u m / D2) Ŝ(a, u, t, b) and compares exactly.
/// Returns the first (m, n) that fails, or nullopt.
inline std::optional<std::pair<Int, Int>> fourier_inversion_check(Int a, Int b, Int D1, Int D2,
                                                                  const Caps& caps = {}) {
  const auto table = shat_table(a, b, D1, D2, caps);
  const Int L = D1 * D2;
  for (Int m = 0; m < D2; ++m)
    for (Int n = 0; n < D1; ++n) {
      CycInt sum{0};
      for (Int u = 0; u < D2; ++u)
        for (Int t = 0; t < D1; ++t) {
          const CycInt& v = table[static_cast<std::size_t>(u * D1 + t)];
          if (v.is_zero()) continue;
          const Int phase = arith::mod((t * n % D1) * D2 + (u * m % D2) * D1, L);
          sum = CycInt::add(sum, CycInt::mul(v, CycInt::root_of_unity(phase, L), caps.order),
                            caps.order);
        }
      if (!(sum == detail::s_naive_raw(a, m, n, b, D1, D2, caps))) return std::pair{m, n};
    }
  return std::nullopt;
}

/// R and R' for one moduli pair, for every residue t mod D1 and u mod D2.
struct RProfile {
  Int D1 = 1, D2 = 1;
  std::vector<double> r;            // R(t; D1, D2), t = 0..D1-1
  std::vector<double> r_alternate;  // max_{(b, D1) = 1} Σ_u |Ŝ(1, u, b t, 1)|
  std::vector<double> r_prime;      // R'(u; D1, D2), u = 0..D2-1
};

inline RProfile r_profile(Int D1, Int D2, const Caps& caps = {}) {
  if (D1 < 1 || D2 < 1) throw InvalidArgument("r_profile: moduli must be positive");
  RProfile out{D1, D2, std::vector<double>(D1, 0.0), std::vector<double>(D1, 0.0),
               std::vector<double>(D2, 0.0)};
  std::vector<Int> units1, units2;
  for (Int x = 0; x < D1; ++x)
    if (arith::gcd(x, D1) == 1) units1.push_back(x);
  for (Int x = 0; x < D2; ++x)
    if (arith::gcd(x, D2) == 1) units2.push_back(x);

  for (Int a : units1) {
    const auto table = shat_table_float(a, 1, D1, D2, caps);
    std::vector<double> col(D1, 0.0), row(D2, 0.0);  // Σ_u |Ŝ(a,u,t,1)|, Σ_t |Ŝ(a,u,t,1)|
    for (Int u = 0; u < D2; ++u)
      for (Int t = 0; t < D1; ++t) {
        const double v = std::abs(table[static_cast<std::size_t>(u * D1 + t)]);
        col[t] += v;
        row[u] += v;
      }
    for (Int t = 0; t < D1; ++t)
      for (Int b : units1) {
        const double v = col[arith::mulmod(b, t, D1)];
        out.r[t] = std::max(out.r[t], v);
        if (a == units1.front()) out.r_alternate[t] = std::max(out.r_alternate[t], v);
      }
    for (Int u = 0; u < D2; ++u)
      for (Int b : units2) out.r_prime[u] = std::max(out.r_prime[u], row[arith::mulmod(b, u, D2)]);
  }
  return out;
}

inline constexpr double kRTolerance = 1e-8;

struct RValue {
  Int t = 0;
  Int D1 = 1, D2 = 1;
  double value = 0.0;
  bool dual = false;  // true for R'(t; D1, D2), where t is the u-slot residue
};

/// R(t; D1, D2), cross-checked against the single-twist form.
inline RValue r_function(Int t, Int D1, Int D2, const Caps& caps = {}) {
  const auto prof = r_profile(D1, D2, caps);
  const Int i = arith::mod(t, D1);
  if (std::abs(prof.r[i] - prof.r_alternate[i]) > kRTolerance)
    throw CheckFailed("R(" + std::to_string(t) + "; " + std::to_string(D1) + ", " +
                      std::to_string(D2) + "): the two forms of the maximum disagree");
  return {t, D1, D2, prof.r[i], false};
}

/// R'(u; D1, D2), cross-checked against R(u; D2, D1).
inline RValue r_prime_function(Int u, Int D1, Int D2, const Caps& caps = {}) {
  const double value = r_profile(D1, D2, caps).r_prime[arith::mod(u, D2)];
  const double dual = r_profile(D2, D1, caps).r[arith::mod(u, D2)];
  if (std::abs(value - dual) > kRTolerance)
    throw CheckFailed("R'(" + std::to_string(u) + "; " + std::to_string(D1) + ", " +
                      std::to_string(D2) + ") differs from R(u; D2, D1)");
  return {u, D1, D2, value, true};
}

/// Σ_{d | t, d^3 | (D1, D2)^2} d, with every d allowed to divide t = 0.
inline Int divisor_majorant_sum(Int t, Int D1, Int D2) {
  const Int g = arith::gcd(D1, D2);
  Int total = 0;
  for (Int d : arith::divisors(g * g)) {
    const Int d3 = arith::checked_mul(arith::checked_mul(d, d), d);
    if ((g * g) % d3 == 0 && (t == 0 || t % d == 0)) total += d;
  }
  return total;
}

struct RBoundRow {
  Int t = 0;
  int nu = 0;
  double r = 0.0;
  double bound = 0.0;         // (k+1) p^l + p^{ν+l} δ(ν <= 2 min(k, l) / 3)
  bool holds = false;
  double sharp_bound = -1.0;  // δ(p ∤ t) p^l when k = 1, l >= 2; else unset
  bool sharp_holds = true;
  double unequal_bound = -1.0;  // k != l: (k+1) p^l + p^{ν/2+l} δ(ν <= min(k, l) / 2)
  bool unequal_holds = true;    // recorded only
  double majorant_ratio = 0.0;  // R / (D2 Σ_{d|t, d^3|(D1,D2)^2} d)
  bool alternate_agrees = false;
  bool duality_holds = false;   // R(t; p^k, p^l) = R'(t; p^l, p^k)
};

struct RBoundReport {
  Int p = 2;
  int k = 0, l = 0;
  std::vector<RBoundRow> rows;

  bool passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const RBoundRow& r) {
      return r.holds && r.sharp_holds && r.alternate_agrees && r.duality_holds;
    });
  }
  double max_majorant_ratio() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.majorant_ratio);
    return m;
  }
};

/// Evaluates R(t; p^k, p^l) for every t mod p^k against the prime-power
/// bound, the sharper (p, p^l) bound, and the divisor-sum majorant.
inline RBoundReport rbound_check(Int p, int k, int l, const Caps& caps = {}) {
  if (!arith::is_prime(p)) throw InvalidArgument("rbound_check: p must be prime");
  if (k < 0 || l < 0) throw InvalidArgument("rbound_check: exponents must be >= 0");
  const Int D1 = arith::checked_pow(p, k), D2 = arith::checked_pow(p, l);
  const auto prof = r_profile(D1, D2, caps);
  const auto dual = r_profile(D2, D1, caps);
  RBoundReport report{p, k, l, {}};
  const double pl = static_cast<double>(D2);
  for (Int t = 0; t < D1; ++t) {
    RBoundRow row;
    row.t = t;
    row.nu = arith::nu_p(arith::ResidueClass{t, D1}, p);
    row.r = prof.r[t];
    const int mn = std::min(k, l);
    const double extra = std::pow(static_cast<double>(p), row.nu + l);
    row.bound = (k + 1) * pl + (3 * row.nu <= 2 * mn ? extra : 0.0);
    row.holds = row.r <= row.bound + kRTolerance;
    if (k == 1 && l >= 2) {
      row.sharp_bound = t % p ? pl : 0.0;
      row.sharp_holds = row.r <= row.sharp_bound + kRTolerance;
    }
    if (k != l) {
      const double half = std::pow(static_cast<double>(p), row.nu / 2.0 + l);
      row.unequal_bound = (k + 1) * pl + (2 * row.nu <= mn ? half : 0.0);
      row.unequal_holds = row.r <= row.unequal_bound + kRTolerance;
    }
    row.majorant_ratio = row.r / (pl * static_cast<double>(divisor_majorant_sum(t, D1, D2)));
    row.alternate_agrees = std::abs(prof.r[t] - prof.r_alternate[t]) <= kRTolerance;
    row.duality_holds = std::abs(prof.r[t] - dual.r_prime[t]) <= kRTolerance;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace gl3ks

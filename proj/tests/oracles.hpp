#pragma once

// Second implementations used only as test oracles.  They follow the
// definitions literally (full residue loops, exhaustive scans) and share no
// code with the library beyond CycInt / PhaseAccumulator.

#include <complex>
#include <numbers>
#include <numeric>
#include <optional>
#include <utility>

#include "gl3ks/cyclotomic.hpp"

namespace oracle {

using gl3ks::Int;

inline Int md(Int a, Int m) { return ((a % m) + m) % m; }

// Some (Y, Z) in [0, D)^2 with Y B + Z C ≡ 1 (mod D), by scanning.
inline std::optional<std::pair<Int, Int>> scan_yz(Int B, Int C, Int D) {
  for (Int Y = 0; Y < D; ++Y)
    for (Int Z = 0; Z < D; ++Z)
      if (md(Y * B + Z * C - 1, D) == 0) return std::pair{Y, Z};
  if (D == 1) return std::pair<Int, Int>{0, 0};
  return std::nullopt;
}

// The long-element sum over all four residues, exactly.
inline gl3ks::CycInt gl3_sum(Int m1, Int m2, Int n1, Int n2, Int D1, Int D2) {
  const Int L = D1 * D2;
  gl3ks::PhaseAccumulator acc(L);
  for (Int B1 = 0; B1 < D1; ++B1)
    for (Int C1 = 0; C1 < D1; ++C1) {
      if (std::gcd(std::gcd(B1, C1), D1) != 1) continue;
      const auto yz1 = scan_yz(B1, C1, D1);
      for (Int B2 = 0; B2 < D2; ++B2)
        for (Int C2 = 0; C2 < D2; ++C2) {
          if (std::gcd(std::gcd(B2, C2), D2) != 1) continue;
          if (md(D1 * C2 + B1 * B2 + C1 * D2, L) != 0) continue;
          const auto yz2 = scan_yz(B2, C2, D2);
          const auto [Y1, Z1] = *yz1;
          const auto [Y2, Z2] = *yz2;
          // e(x1 / D1) e(x2 / D2) = e((x1 D2 + x2 D1) / L)
          const Int x1 = m1 * B1 + n1 * (Y1 * D2 - Z1 * B2);
          const Int x2 = m2 * B2 + n2 * (Y2 * D1 - Z2 * B1);
          acc.add(md(x1, D1) * D2 + md(x2, D2) * D1);
        }
    }
  return acc.value();
}

inline std::complex<double> e(double x) { return std::polar(1.0, 2.0 * std::numbers::pi * x); }

// Ŝ from its definition as a normalized double Fourier sum, in floats.
inline std::complex<double> shat(Int a, Int u, Int t, Int b, Int D1, Int D2) {
  std::complex<double> total{};
  for (Int x = 0; x < D1; ++x)
    for (Int y = 0; y < D2; ++y)
      total += gl3_sum(a, y, x, b, D1, D2).to_complex() *
               e(-static_cast<double>(x * t) / static_cast<double>(D1) -
                 static_cast<double>(y * u) / static_cast<double>(D2));
  return total / static_cast<double>(D1 * D2);
}

// S(m, n; c) in floats, inverse found by scanning.
inline std::complex<double> kloosterman(Int m, Int n, Int c) {
  std::complex<double> s{};
  for (Int x = 0; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    Int xbar = 0;
    while (md(x * xbar, c) != 1 % c) ++xbar;
    s += e(static_cast<double>(md(m * x + n * xbar, c)) / static_cast<double>(c));
  }
  return s;
}

}  // namespace oracle

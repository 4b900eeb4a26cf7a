#pragma once

// GL(2) exponential sums used as building blocks by the GL(3) evaluators.

#include <vector>

#include "gl3ks/arith.hpp"
#include "gl3ks/cyclotomic.hpp"

namespace gl3ks::arith {

/// S(m, n; c) = Σ*_{x mod c} e((m x + n x̄)/c), by direct summation.
inline CycInt classical_kloosterman(Int m, Int n, Int c) {
  if (c < 1) throw InvalidArgument("classical_kloosterman: modulus must be positive");
  if (c == 1) return CycInt{1};
  const Int mm = mod(m, c), nn = mod(n, c);
  PhaseAccumulator acc(c);
  for (Int x = 1; x < c; ++x) {
    auto [g, xi, unused] = extended_gcd(x, c);
    (void)unused;
    if (g != 1) continue;
    Int xbar = mod(xi, c);
    acc.add(mulmod(mm, x, c) + mulmod(nn, xbar, c));
  }
  return acc.value();
}

/// c_c(n) = Σ*_{x mod c} e(x n / c).
inline CycInt ramanujan_sum(Int n, Int c) {
  if (c < 1) throw InvalidArgument("ramanujan_sum: modulus must be positive");
  if (c == 1) return CycInt{1};
  const Int nn = mod(n, c);
  PhaseAccumulator acc(c);
  for (Int x = 1; x < c; ++x)
    if (gcd(x, c) == 1) acc.add(mulmod(x, nn, c));
  return acc.value();
}

}  // namespace gl3ks::arith

#pragma once

// Modular arithmetic and factorization helpers shared by every module.
//
// All integers are 64-bit.  Every operation that can leave the 64-bit range
// goes through the checked helpers below and raises gl3ks::Overflow instead
// of wrapping.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gl3ks/errors.hpp"

namespace gl3ks {

using Int = std::int64_t;

namespace arith {

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow("integer overflow in addition");
  return r;
}

inline Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw Overflow("integer overflow in subtraction");
  return r;
}

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow("integer overflow in multiplication");
  return r;
}

inline Int checked_pow(Int base, int exp) {
  Int r = 1;
  for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

/// Least nonnegative residue of a modulo m (m >= 1).
constexpr Int mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

/// (a * b) mod m without intermediate overflow.
inline Int mulmod(Int a, Int b, Int m) {
  return static_cast<Int>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

inline Int gcd(Int a, Int b) { return std::gcd(a, b); }

inline Int lcm(Int a, Int b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / gcd(a, b), b < 0 ? -b : b);
}

struct ExtendedGcd {
  Int g;  // gcd(a, b) >= 0
  Int x;  // a*x + b*y = g
  Int y;
};

inline ExtendedGcd extended_gcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

/// A residue class value mod modulus, with 0 <= value < modulus.
struct ResidueClass {
  Int value = 0;
  Int modulus = 1;

  ResidueClass() = default;
  ResidueClass(Int v, Int m) : value(0), modulus(m) {
    if (m < 1) throw InvalidArgument("residue class modulus must be positive");
    value = mod(v, m);
  }
  friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
};

/// Inverse of a modulo m; the inverse modulo 1 is the class 0.
inline ResidueClass mod_inverse(Int a, Int m) {
  if (m < 1) throw InvalidArgument("mod_inverse: modulus must be positive");
  if (m == 1) return {0, 1};
  auto [g, x, y] = extended_gcd(mod(a, m), m);
  (void)y;
  if (g != 1)
    throw NotInvertible("mod_inverse: gcd(" + std::to_string(a) + ", " + std::to_string(m) +
                        ") = " + std::to_string(g));
  return {x, m};
}

/// Shorthand returning only the value of mod_inverse.
inline Int inv(Int a, Int m) { return mod_inverse(a, m).value; }

/// Combine residues with pairwise coprime moduli into one class mod their product.
inline ResidueClass crt_combine(std::span<const ResidueClass> residues) {
  ResidueClass acc{0, 1};
  for (const auto& r : residues) {
    if (gcd(acc.modulus, r.modulus) != 1)
      throw ModuliNotCoprime("crt_combine: moduli " + std::to_string(acc.modulus) + " and " +
                             std::to_string(r.modulus) + " share a factor");
    Int m = checked_mul(acc.modulus, r.modulus);
    // acc.value + acc.modulus * k  ≡ r.value  (mod r.modulus)
    Int k = mulmod(r.value - acc.value, inv(acc.modulus, r.modulus), r.modulus);
    acc = ResidueClass{acc.value + static_cast<Int>(static_cast<__int128>(acc.modulus) * k % m),
                       m};
  }
  return acc;
}

inline ResidueClass crt_combine(std::initializer_list<ResidueClass> residues) {
  return crt_combine(std::span<const ResidueClass>(residues.begin(), residues.size()));
}

struct PrimePower {
  Int prime;
  int exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// value = product of prime^exponent over factors; primes strictly increasing.
struct Factorization {
  Int value = 1;
  std::vector<PrimePower> factors;

  int exponent_of(Int p) const {
    for (const auto& f : factors)
      if (f.prime == p) return f.exponent;
    return 0;
  }
};

/// Trial division.  Moduli handled by this library are small.
inline Factorization factorize(Int n) {
  if (n < 1) throw InvalidArgument("factorize: argument must be positive");
  Factorization out{n, {}};
  for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.factors.push_back({p, e});
  }
  if (n > 1) out.factors.push_back({n, 1});
  return out;
}

inline bool is_prime(Int n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline bool is_squarefree(Int n) {
  for (const auto& f : factorize(n).factors)
    if (f.exponent > 1) return false;
  return true;
}

/// Returns the prime p and exponent k with n = p^k, or nullopt-like {0, -1}
/// when n is not a prime power.  n = 1 gives {0, 0}.
inline PrimePower as_prime_power(Int n) {
  auto f = factorize(n);
  if (f.factors.empty()) return {0, 0};
  if (f.factors.size() > 1) return {0, -1};
  return f.factors.front();
}

inline Int euler_phi(Int n) {
  if (n < 1) throw InvalidArgument("euler_phi: argument must be positive");
  Int phi = n;
  for (const auto& f : factorize(n).factors) phi = phi / f.prime * (f.prime - 1);
  return phi;
}

/// p-adic valuation of a nonzero integer.
inline int nu_p(Int t, Int p) {
  if (t == 0) throw InvalidArgument("nu_p: valuation of 0 is infinite; use the residue form");
  int v = 0;
  while (t % p == 0) {
    t /= p;
    ++v;
  }
  return v;
}

/// Valuation of a class modulo p^k: the largest j <= k with p^j | t.
inline int nu_p(ResidueClass t, Int p) {
  int k = 0;
  for (Int m = t.modulus; m > 1; m /= p) {
    if (m % p) throw InvalidArgument("nu_p: modulus is not a power of p");
    ++k;
  }
  int v = 0;
  Int x = t.value;
  while (v < k && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

/// Number of n <= limit whose set of prime divisors equals that of q.
inline Int same_prime_support_count(Int q, Int limit) {
  if (q < 1 || limit < 0) throw InvalidArgument("same_prime_support_count: bad arguments");
  auto f = factorize(q);
  Int count = 0;
  // Each prime must appear with exponent >= 1: start from the radical.
  auto recurse = [&](auto&& self, std::size_t i, Int acc) -> void {
    if (i == f.factors.size()) {
      ++count;
      return;
    }
    Int p = f.factors[i].prime;
    for (Int x = acc; x <= limit / p;) {
      x *= p;
      self(self, i + 1, x);
      if (x > limit / p) break;
    }
  };
  if (limit >= 1) recurse(recurse, 0, 1);
  return count;
}

/// Divisors of n in increasing order.
inline std::vector<Int> divisors(Int n) {
  std::vector<Int> small, large;
  for (Int d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    small.push_back(d);
    if (d * d != n) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

}  // namespace arith
}  // namespace gl3ks

#pragma once

// The bilinear form
//
//   𝒮(α, β, γ) = Σ γ_{D1,D2} α_m β_n S(1, ε1 m, ε2 n, 1; D1, D2)
//
// over m, n <= N, D1 <= X1, D2 <= X2, the large-sieve quantity
//
//   M(β) = Σ_{q <= Q} Σ_{d1 | q} (d1 / q) Σ_{c <= X1/q, (c, q) = 1} Σ*_{t mod c}
//          |Σ_{(n, q) = d1} β_n e(t n / c)|²,          Q = min(X1, X2),
//
// (M*(β) truncates q at min(H1, H2)), and ratio experiments comparing |𝒮|
// with the bounds it is expected to satisfy.  Exponent epsilons are set to 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gl3ks/arith.hpp"
#include "gl3ks/gl3_sums.hpp"
#include "gl3ks/rng.hpp"

namespace gl3ks {

using Complex = std::complex<double>;

/// Finitely supported sequence n -> β_n on 1 <= n <= bound.
class CoeffSeq {
 public:
  explicit CoeffSeq(Int bound = 0) : bound_(bound) {
    if (bound < 0) throw InvalidArgument("coefficient bound must be >= 0");
  }

  void set(Int n, Complex v) {
    if (n < 1 || n > bound_)
      throw InvalidArgument("index " + std::to_string(n) + " outside 1.." + std::to_string(bound_));
    if (v == Complex{}) entries_.erase(n);
    else entries_[n] = v;
  }
  Complex at(Int n) const {
    auto it = entries_.find(n);
    return it == entries_.end() ? Complex{} : it->second;
  }
  Int bound() const { return bound_; }
  const std::map<Int, Complex>& entries() const { return entries_; }

  double norm() const {
    double s = 0.0;
    for (const auto& [n, v] : entries_) s += std::norm(v);
    return std::sqrt(s);
  }

 private:
  Int bound_;
  std::map<Int, Complex> entries_;
};

/// Sequence (D1, D2) -> γ on D1 <= X1, D2 <= X2 with |γ| <= 1.
class GammaSeq {
 public:
  GammaSeq(Int X1 = 0, Int X2 = 0) : X1_(X1), X2_(X2) {
    if (X1 < 0 || X2 < 0) throw InvalidArgument("γ support bounds must be >= 0");
  }

  void set(Int D1, Int D2, Complex v) {
    if (D1 < 1 || D1 > X1_ || D2 < 1 || D2 > X2_)
      throw InvalidArgument("γ index (" + std::to_string(D1) + ", " + std::to_string(D2) +
                            ") outside the support box");
    if (std::abs(v) > 1.0 + 1e-12) throw InvalidArgument("γ entries must satisfy |γ| <= 1");
    if (v == Complex{}) entries_.erase({D1, D2});
    else entries_[{D1, D2}] = v;
  }
  Complex at(Int D1, Int D2) const {
    auto it = entries_.find({D1, D2});
    return it == entries_.end() ? Complex{} : it->second;
  }
  Int X1() const { return X1_; }
  Int X2() const { return X2_; }
  const std::map<std::pair<Int, Int>, Complex>& entries() const { return entries_; }

 private:
  Int X1_, X2_;
  std::map<std::pair<Int, Int>, Complex> entries_;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

template <typename Row>
void read_csv(std::istream& in, const std::vector<std::string>& header, Row&& row) {
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != header) {
    std::string expected;
    for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
    throw InvalidArgument("coefficient file must start with header '" + expected + "'");
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw InvalidArgument("line " + std::to_string(lineno) + ": expected " +
                            std::to_string(header.size()) + " fields");
    try {
      row(cells);
    } catch (const std::logic_error&) {
      throw InvalidArgument("line " + std::to_string(lineno) + ": malformed number");
    }
  }
}

}  // namespace detail

/// Reads `index,re,im` rows; the bound is the given one, or the largest index.
inline CoeffSeq read_coeff_csv(std::istream& in, std::optional<Int> bound = std::nullopt) {
  std::vector<std::pair<Int, Complex>> rows;
  detail::read_csv(in, {"index", "re", "im"}, [&](const std::vector<std::string>& c) {
    rows.emplace_back(std::stoll(c[0]), Complex{std::stod(c[1]), std::stod(c[2])});
  });
  Int b = bound.value_or(0);
  if (!bound)
    for (const auto& r : rows) b = std::max(b, r.first);
  CoeffSeq seq(b);
  for (const auto& [n, v] : rows) seq.set(n, v);
  return seq;
}

inline GammaSeq read_gamma_csv(std::istream& in, std::optional<std::pair<Int, Int>> box = std::nullopt) {
  std::vector<std::pair<std::pair<Int, Int>, Complex>> rows;
  detail::read_csv(in, {"d1", "d2", "re", "im"}, [&](const std::vector<std::string>& c) {
    rows.push_back({{std::stoll(c[0]), std::stoll(c[1])}, Complex{std::stod(c[2]), std::stod(c[3])}});
  });
  Int X1 = box ? box->first : 0, X2 = box ? box->second : 0;
  if (!box)
    for (const auto& r : rows) {
      X1 = std::max(X1, r.first.first);
      X2 = std::max(X2, r.first.second);
    }
  GammaSeq seq(X1, X2);
  for (const auto& [d, v] : rows) seq.set(d.first, d.second, v);
  return seq;
}

inline CoeffSeq read_coeff_file(const std::string& path, std::optional<Int> bound = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return read_coeff_csv(in, bound);
}

inline GammaSeq read_gamma_file(const std::string& path,
                                std::optional<std::pair<Int, Int>> box = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return read_gamma_csv(in, box);
}

enum class Evaluator { fast, naive };

struct Signs {
  int e1 = 1, e2 = 1;
};

/// Complex values of S(1, ε1 m, ε2 n, 1; D1, D2), which depend on m only mod
/// D2 and on n only mod D1; each moduli pair is evaluated once, on demand.
class SumTable {
 public:
  explicit SumTable(Signs signs = {}, Evaluator ev = Evaluator::fast, Caps caps = {})
      : signs_(signs), ev_(ev), caps_(caps) {
    if (std::abs(signs.e1) != 1 || std::abs(signs.e2) != 1)
      throw InvalidArgument("signs must be +1 or -1");
  }

  Complex operator()(Int m, Int n, Int D1, Int D2) {
    const auto& block = values(D1, D2);
    return block[static_cast<std::size_t>(arith::mod(m, D2) * D1 + arith::mod(n, D1))];
  }

  /// Table indexed [(m mod D2) * D1 + (n mod D1)].
  const std::vector<Complex>& values(Int D1, Int D2) {
    auto it = cache_.find({D1, D2});
    if (it != cache_.end()) return it->second;
    std::vector<Complex> block(static_cast<std::size_t>(D1 * D2));
    for (Int r = 0; r < D2; ++r)
      for (Int s = 0; s < D1; ++s) {
        const Int m = signs_.e1 * r, n = signs_.e2 * s;
        const CycInt v = ev_ == Evaluator::fast ? detail::s_fast_raw(1, m, n, 1, D1, D2, caps_)
                                                : detail::s_naive_raw(1, m, n, 1, D1, D2, caps_);
        block[static_cast<std::size_t>(r * D1 + s)] = v.to_complex();
      }
    return cache_.emplace(std::pair{D1, D2}, std::move(block)).first->second;
  }

 private:
  Signs signs_;
  Evaluator ev_;
  Caps caps_;
  std::map<std::pair<Int, Int>, std::vector<Complex>> cache_;
};

/// Σ_{m, n} α_m β_n S(1, ε1 m, ε2 n, 1; D1, D2) for one moduli pair, with the
/// coefficients folded into residue classes first.
inline Complex inner_sum(const CoeffSeq& alpha, const CoeffSeq& beta, Int D1, Int D2,
                         SumTable& table) {
  std::vector<Complex> a(static_cast<std::size_t>(D2)), b(static_cast<std::size_t>(D1));
  for (const auto& [m, v] : alpha.entries()) a[static_cast<std::size_t>(m % D2)] += v;
  for (const auto& [n, v] : beta.entries()) b[static_cast<std::size_t>(n % D1)] += v;
  const auto& s = table.values(D1, D2);
  Complex total{};
  for (Int r = 0; r < D2; ++r) {
    if (a[r] == Complex{}) continue;
    Complex row{};
    for (Int c = 0; c < D1; ++c) row += b[c] * s[static_cast<std::size_t>(r * D1 + c)];
    total += a[r] * row;
  }
  return total;
}

inline Complex bilinear_s(const CoeffSeq& alpha, const CoeffSeq& beta, const GammaSeq& gamma,
                          SumTable& table) {
  Complex total{};
  for (const auto& [d, g] : gamma.entries()) total += g * inner_sum(alpha, beta, d.first, d.second, table);
  return total;
}

inline Complex bilinear_s(const CoeffSeq& alpha, const CoeffSeq& beta, const GammaSeq& gamma,
                          Signs signs = {}, const Caps& caps = {}) {
  SumTable table(signs, Evaluator::fast, caps);
  return bilinear_s(alpha, beta, gamma, table);
}

/// M(β); with q_cap set, the truncation q <= min(q_cap, X1, X2) giving M*(β).
inline double m_beta(const CoeffSeq& beta, Int X1, Int X2, std::optional<Int> q_cap = std::nullopt) {
  if (X1 < 1 || X2 < 1) throw InvalidArgument("m_beta: X1, X2 must be >= 1");
  Int Q = std::min(X1, X2);
  if (q_cap) Q = std::min(Q, *q_cap);
  double total = 0.0;
  for (Int q = 1; q <= Q; ++q) {
    for (Int d1 : arith::divisors(q)) {
      // β restricted to (n, q) = d1
      std::vector<std::pair<Int, Complex>> part;
      for (const auto& [n, v] : beta.entries())
        if (arith::gcd(n, q) == d1) part.emplace_back(n, v);
      if (part.empty()) continue;
      double inner = 0.0;
      for (Int c = 1; c <= X1 / q; ++c) {
        if (arith::gcd(c, q) != 1) continue;
        for (Int t = 0; t < c; ++t) {
          if (arith::gcd(t, c) != 1) continue;
          Complex s{};
          for (const auto& [n, v] : part)
            s += v * std::polar(1.0, 2.0 * std::numbers::pi *
                                         static_cast<double>(arith::mulmod(t, n, c)) /
                                         static_cast<double>(c));
          inner += std::norm(s);
        }
      }
      total += static_cast<double>(d1) / static_cast<double>(q) * inner;
    }
  }
  return total;
}

/// A(d1, d2, q) = Π_{p | (d1, d2)} (p² - p + 1) · Π_{p | q, p ∤ d1 d2} (p + 1).
inline Int a_function(Int d1, Int d2, Int q) {
  if (d1 < 1 || d2 < 1 || q < 1 || q % d1 || q % d2 || !arith::is_squarefree(q))
    throw InvalidDivisors("a_function: needs squarefree q with d1 | q and d2 | q");
  Int out = 1;
  for (const auto& f : arith::factorize(q).factors) {
    const Int p = f.prime;
    if (d1 % p == 0 && d2 % p == 0) out *= p * p - p + 1;
    else if (d1 % p && d2 % p) out *= p + 1;
  }
  return out;
}

/// A(d1, d2, q) / (q (d1, d2)³ / (d1 d2)).
inline double a_bound_ratio(Int d1, Int d2, Int q) {
  const double g = static_cast<double>(arith::gcd(d1, d2));
  return static_cast<double>(a_function(d1, d2, q)) * static_cast<double>(d1 * d2) /
         (static_cast<double>(q) * g * g * g);
}

/// Largest a_bound_ratio over squarefree q <= q_max and divisor pairs of q.
inline double max_a_bound_ratio(Int q_max) {
  double best = 0.0;
  for (Int q = 1; q <= q_max; ++q) {
    if (!arith::is_squarefree(q)) continue;
    const auto divs = arith::divisors(q);
    for (Int d1 : divs)
      for (Int d2 : divs) best = std::max(best, a_bound_ratio(d1, d2, q));
  }
  return best;
}

struct GridPoint {
  Int N = 0, X1 = 0, X2 = 0;
  std::optional<Int> H1, H2;
};

/// One comparison of |𝒮| with a bound: ratio = lhs / rhs, where rhs is the
/// sum of rhs_components.  `comparisons` holds lhs divided by other bounds.
struct BoundReport {
  GridPoint point;
  int trial = 0;
  double lhs = 0.0;
  std::vector<std::pair<std::string, double>> rhs_components;
  double rhs = 0.0;
  double ratio = 0.0;
  std::vector<std::pair<std::string, double>> comparisons;
};

inline double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

/// Trial coefficients: even trials draw random signs, odd trials random
/// unit-modulus phases.
inline CoeffSeq random_coeffs(Int N, int trial, Rng& rng) {
  CoeffSeq s(N);
  for (Int n = 1; n <= N; ++n) {
    if (trial % 2 == 0) s.set(n, rng.coin() ? 1.0 : -1.0);
    else s.set(n, std::polar(1.0, 2.0 * std::numbers::pi * rng.unit()));
  }
  return s;
}

/// γ with |γ| = 1 aligned against each inner sum, so that 𝒮 = Σ |inner|.
inline GammaSeq adversarial_gamma(const CoeffSeq& alpha, const CoeffSeq& beta, Int X1, Int X2,
                                  SumTable& table) {
  GammaSeq g(X1, X2);
  for (Int D1 = 1; D1 <= X1; ++D1)
    for (Int D2 = 1; D2 <= X2; ++D2) {
      const Complex inner = inner_sum(alpha, beta, D1, D2, table);
      const double r = std::abs(inner);
      g.set(D1, D2, r > 1e-12 ? std::conj(inner) / r : Complex{1.0, 0.0});
    }
  return g;
}

/// Per trial: |𝒮| against X1 X2 M(α)^{1/2} M(β)^{1/2}, with comparisons to
/// the trivial bound (X1 X2)^{3/2} N ‖α‖ ‖β‖ and to the large-sieve form
/// X1 X2 (X1² + N)^{1/2} (X2² + N)^{1/2} ‖α‖ ‖β‖.
inline std::vector<BoundReport> theorem2_experiment(Int N, Int X1, Int X2, int trials,
                                                    std::uint64_t seed, const Caps& caps = {}) {
  if (N < 1 || X1 < 1 || X2 < 1 || trials < 0)
    throw InvalidArgument("theorem2_experiment: N, X1, X2 >= 1 and trials >= 0 required");
  Rng rng(derive_seed(seed, {2, N, X1, X2}));
  SumTable table({}, Evaluator::fast, caps);
  std::vector<BoundReport> out;
  const double x1 = static_cast<double>(X1), x2 = static_cast<double>(X2), n = static_cast<double>(N);
  for (int trial = 0; trial < trials; ++trial) {
    const CoeffSeq alpha = random_coeffs(N, trial, rng);
    const CoeffSeq beta = random_coeffs(N, trial, rng);
    const GammaSeq gamma = adversarial_gamma(alpha, beta, X1, X2, table);
    BoundReport r;
    r.point = {N, X1, X2, std::nullopt, std::nullopt};
    r.trial = trial;
    r.lhs = std::abs(bilinear_s(alpha, beta, gamma, table));
    const double ma = m_beta(alpha, X1, X2), mb = m_beta(beta, X1, X2);
    r.rhs = static_cast<double>(X1 * X2) * std::sqrt(ma * mb);
    r.rhs_components = {{"M_alpha", ma}, {"M_beta", mb}};
    r.ratio = safe_ratio(r.lhs, r.rhs);
    const double norms = alpha.norm() * beta.norm();
    r.comparisons = {
        {"trivial_ratio", safe_ratio(r.lhs, std::pow(x1 * x2, 1.5) * n * norms)},
        {"large_sieve_form_ratio",
         safe_ratio(r.lhs, x1 * x2 * std::sqrt((x1 * x1 + n) * (x2 * x2 + n)) * norms)},
        {"m_beta_large_sieve_ratio", safe_ratio(mb, (x1 * x1 + n) * beta.norm() * beta.norm())}};
    out.push_back(std::move(r));
  }
  return out;
}

/// Per trial: |𝒮| against
///   (X1 H2 + X2 H1) M*(α)^{1/2} M*(β)^{1/2} + (X1 X2)^{3/2} N ‖α‖ ‖β‖ (1/H1 + 1/H2).
/// The draws for (N, X1, X2) are the same as in theorem2_experiment.
inline std::vector<BoundReport> theorem3_experiment(Int N, Int X1, Int X2, Int H1, Int H2, int trials,
                                                    std::uint64_t seed, const Caps& caps = {}) {
  if (N < 1 || X1 < 1 || X2 < 1 || trials < 0)
    throw InvalidArgument("theorem3_experiment: N, X1, X2 >= 1 and trials >= 0 required");
  if (H1 < 1 || H1 > X1 || H2 < 1 || H2 > X2)
    throw InvalidHRange("theorem3_experiment: need 1 <= H1 <= X1 and 1 <= H2 <= X2");
  Rng rng(derive_seed(seed, {2, N, X1, X2}));
  SumTable table({}, Evaluator::fast, caps);
  std::vector<BoundReport> out;
  const double n = static_cast<double>(N);
  for (int trial = 0; trial < trials; ++trial) {
    const CoeffSeq alpha = random_coeffs(N, trial, rng);
    const CoeffSeq beta = random_coeffs(N, trial, rng);
    const GammaSeq gamma = adversarial_gamma(alpha, beta, X1, X2, table);
    BoundReport r;
    r.point = {N, X1, X2, H1, H2};
    r.trial = trial;
    r.lhs = std::abs(bilinear_s(alpha, beta, gamma, table));
    const Int qcap = std::min(H1, H2);
    const double ma = m_beta(alpha, X1, X2, qcap), mb = m_beta(beta, X1, X2, qcap);
    const double first = static_cast<double>(X1 * H2 + X2 * H1) * std::sqrt(ma * mb);
    const double second = std::pow(static_cast<double>(X1 * X2), 1.5) * n * alpha.norm() *
                          beta.norm() * (1.0 / static_cast<double>(H1) + 1.0 / static_cast<double>(H2));
    r.rhs_components = {{"M_star_alpha", ma}, {"M_star_beta", mb}, {"first_term", first}, {"second_term", second}};
    r.rhs = first + second;
    r.ratio = safe_ratio(r.lhs, r.rhs);
    out.push_back(std::move(r));
  }
  return out;
}

inline const BoundReport* worst(const std::vector<BoundReport>& reports) {
  const BoundReport* best = nullptr;
  for (const auto& r : reports)
    if (!best || r.ratio > best->ratio) best = &r;
  return best;
}

/// At H1 = X1, H2 = X2 the first term of the H-parameter bound is
/// (X1 X2 + X2 X1) M^{1/2} M^{1/2}, twice the M-bound; true iff every trial
/// reproduces that exactly (same draws, same floating-point operations).
inline bool degeneration_identity(Int N, Int X1, Int X2, int trials, std::uint64_t seed,
                                  const Caps& caps = {}) {
  const auto t2 = theorem2_experiment(N, X1, X2, trials, seed, caps);
  const auto t3 = theorem3_experiment(N, X1, X2, X1, X2, trials, seed, caps);
  for (std::size_t i = 0; i < t2.size(); ++i) {
    const double ma = t2[i].rhs_components[0].second, mb = t2[i].rhs_components[1].second;
    if (t3[i].rhs_components[0].second != ma || t3[i].rhs_components[1].second != mb) return false;
    if (t3[i].rhs_components[2].second != static_cast<double>(2 * X1 * X2) * std::sqrt(ma * mb)) return false;
    if (t3[i].lhs != t2[i].lhs) return false;
  }
  return true;
}

/// 𝒮 split by gcd(D1, D2).
struct StrataReport {
  Complex total;
  Complex coprime;             // (D1, D2) = 1, direct
  Complex coprime_factored;    // same stratum through S(D2, n; D1) S(D1 m, 1; D2)
  Complex equal_prime;         // D1 = D2 = p, direct
  Complex equal_prime_formula; // same stratum through S(m, 0; p) S(n, 0; p) + p
  Complex equal_prime_main;    // Σ_p (p + 1) γ_pp Σ_{p∤m} α_m Σ_{p∤n} β_n
  Complex remainder;           // every other pair
  double additivity_error = 0.0;
  double coprime_error = 0.0;
  double equal_prime_error = 0.0;
};

inline constexpr double kStrataTolerance = 1e-8;

inline StrataReport gcd_stratification(const CoeffSeq& alpha, const CoeffSeq& beta,
                                       const GammaSeq& gamma, Signs signs = {},
                                       const Caps& caps = {}) {
  SumTable table(signs, Evaluator::fast, caps);
  StrataReport r;
  for (const auto& [d, g] : gamma.entries()) {
    const auto [D1, D2] = d;
    const Complex v = g * inner_sum(alpha, beta, D1, D2, table);
    if (arith::gcd(D1, D2) == 1) {
      r.coprime += v;
      Complex f{};
      for (const auto& [m, am] : alpha.entries())
        for (const auto& [n, bn] : beta.entries()) {
          const auto pair = factor_coprime({1, signs.e1 * m, signs.e2 * n, 1, D1, D2});
          f += am * bn * pair.product().to_complex();
        }
      r.coprime_factored += g * f;
    } else if (D1 == D2 && arith::is_prime(D1)) {
      const Int p = D1;
      r.equal_prime += v;
      Complex f{}, sa{}, sb{};
      auto ram = [p](Int x) { return x % p == 0 ? static_cast<double>(p - 1) : -1.0; };
      for (const auto& [m, am] : alpha.entries()) {
        if (m % p) sa += am;
        for (const auto& [n, bn] : beta.entries())
          f += am * bn * (ram(m) * ram(n) + static_cast<double>(p));
      }
      for (const auto& [n, bn] : beta.entries())
        if (n % p) sb += bn;
      r.equal_prime_formula += g * f;
      r.equal_prime_main += static_cast<double>(p + 1) * g * sa * sb;
    } else {
      r.remainder += v;
    }
  }
  r.total = bilinear_s(alpha, beta, gamma, table);
  r.additivity_error = std::abs(r.coprime + r.equal_prime + r.remainder - r.total);
  r.coprime_error = std::abs(r.coprime - r.coprime_factored);
  r.equal_prime_error = std::abs(r.equal_prime - r.equal_prime_formula);
  return r;
}

}  // namespace gl3ks

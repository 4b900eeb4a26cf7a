#pragma once

// Exact arithmetic in the cyclotomic integers Z[ζ_N].
//
// A CycInt is stored in a canonical form: an order N and a length-N
// coefficient vector c with value Σ c_k ζ_N^k, where
//   * only basis exponents carry nonzero coefficients, and
//   * N is the smallest order whose ring contains the value.
// Two CycInts are equal as algebraic numbers iff their canonical forms are
// identical, so operator== is a plain structural comparison.
//
// The basis is the tensor product of power bases of Z[ζ_Q] over the prime
// power factors Q = p^e of N.  Exponent k of ζ_N corresponds to the tuple
// (k·w_Q mod Q)_Q with w_Q = (N/Q)^{-1} mod Q, since 1/N ≡ Σ w_Q/Q (mod 1).
// Along each factor the relation Σ_{r<p} ζ_Q^{r p^{e-1} + s} = 0 rewrites
// every exponent j >= φ(Q) in terms of smaller ones.

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gl3ks/arith.hpp"

namespace gl3ks {

inline constexpr Int kDefaultOrderCap = 100000;

class CycInt {
 public:
  CycInt() : order_(1), coeffs_{0} {}
  CycInt(Int v) : order_(1), coeffs_{v} {}  // NOLINT: integers embed implicitly

  /// e(a/N).
  static CycInt root_of_unity(Int a, Int n, Int order_cap = kDefaultOrderCap) {
    if (n < 1) throw InvalidArgument("root_of_unity: order must be positive");
    check_cap(n, order_cap);
    std::vector<Int> c(static_cast<std::size_t>(n), 0);
    c[static_cast<std::size_t>(arith::mod(a, n))] = 1;
    return from_exponent_counts(n, std::move(c));
  }

  /// Σ counts[k] ζ_N^k, canonicalized.  counts.size() must equal N.
  static CycInt from_exponent_counts(Int n, std::vector<Int> counts) {
    if (n < 1 || static_cast<Int>(counts.size()) != n)
      throw InvalidArgument("from_exponent_counts: size must equal the order");
    CycInt out;
    out.order_ = n;
    out.coeffs_ = std::move(counts);
    out.canonicalize();
    return out;
  }

  Int order() const { return order_; }
  const std::vector<Int>& coeffs() const { return coeffs_; }

  bool is_zero() const { return order_ == 1 && coeffs_[0] == 0; }
  bool is_rational() const { return order_ == 1; }

  Int rational_value() const {
    if (!is_rational()) throw InvalidArgument("CycInt is not a rational integer: " + to_string());
    return coeffs_[0];
  }

  std::complex<double> to_complex() const {
    std::complex<double> acc{0.0, 0.0};
    const double step = 2.0 * std::numbers::pi / static_cast<double>(order_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k] == 0) continue;
      double angle = step * static_cast<double>(k);
      acc += static_cast<double>(coeffs_[k]) * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return acc;
  }

  /// Complex conjugate (ζ -> ζ^{-1}).
  CycInt conj() const {
    std::vector<Int> c(coeffs_.size(), 0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
      c[static_cast<std::size_t>(arith::mod(-static_cast<Int>(k), order_))] = coeffs_[k];
    return from_exponent_counts(order_, std::move(c));
  }

  /// Exact division by a nonzero integer; throws when some canonical
  /// coefficient is not divisible (the quotient is then not in Z[ζ_N]).
  CycInt divide_exact(Int d) const {
    if (d == 0) throw InvalidArgument("divide_exact: division by zero");
    CycInt out = *this;
    for (auto& c : out.coeffs_) {
      if (c % d != 0)
        throw InvalidArgument("divide_exact: " + to_string() + " is not divisible by " +
                              std::to_string(d));
      c /= d;
    }
    return out;
  }

  static CycInt add(const CycInt& x, const CycInt& y, Int order_cap = kDefaultOrderCap) {
    Int l = arith::lcm(x.order_, y.order_);
    check_cap(l, order_cap);
    std::vector<Int> c(static_cast<std::size_t>(l), 0);
    x.accumulate_lifted(c, l, 1);
    y.accumulate_lifted(c, l, 1);
    return from_exponent_counts(l, std::move(c));
  }

  static CycInt sub(const CycInt& x, const CycInt& y, Int order_cap = kDefaultOrderCap) {
    Int l = arith::lcm(x.order_, y.order_);
    check_cap(l, order_cap);
    std::vector<Int> c(static_cast<std::size_t>(l), 0);
    x.accumulate_lifted(c, l, 1);
    y.accumulate_lifted(c, l, -1);
    return from_exponent_counts(l, std::move(c));
  }

  static CycInt mul(const CycInt& x, const CycInt& y, Int order_cap = kDefaultOrderCap) {
    Int l = arith::lcm(x.order_, y.order_);
    check_cap(l, order_cap);
    if (x.is_zero() || y.is_zero()) return CycInt{};
    std::vector<Int> c(static_cast<std::size_t>(l), 0);
    const Int sx = l / x.order_, sy = l / y.order_;
    for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
      if (x.coeffs_[i] == 0) continue;
      const Int ei = static_cast<Int>(i) * sx;
      for (std::size_t j = 0; j < y.coeffs_.size(); ++j) {
        if (y.coeffs_[j] == 0) continue;
        Int e = ei + static_cast<Int>(j) * sy;
        if (e >= l) e -= l;
        auto& slot = c[static_cast<std::size_t>(e)];
        slot = arith::checked_add(slot, arith::checked_mul(x.coeffs_[i], y.coeffs_[j]));
      }
    }
    return from_exponent_counts(l, std::move(c));
  }

  CycInt scaled(Int s) const {
    if (s == 0) return CycInt{};
    CycInt out = *this;
    for (auto& c : out.coeffs_) c = arith::checked_mul(c, s);
    return out;
  }

  friend CycInt operator+(const CycInt& x, const CycInt& y) { return add(x, y); }
  friend CycInt operator-(const CycInt& x, const CycInt& y) { return sub(x, y); }
  friend CycInt operator*(const CycInt& x, const CycInt& y) { return mul(x, y); }
  friend CycInt operator-(const CycInt& x) { return x.scaled(-1); }
  CycInt& operator+=(const CycInt& y) { return *this = add(*this, y); }
  CycInt& operator-=(const CycInt& y) { return *this = sub(*this, y); }
  CycInt& operator*=(const CycInt& y) { return *this = mul(*this, y); }

  friend bool operator==(const CycInt& x, const CycInt& y) {
    return x.order_ == y.order_ && x.coeffs_ == y.coeffs_;
  }

  /// e.g. "2 - z^3 + 4*z^5 [z = e(1/12)]"; rationals print as plain integers.
  std::string to_string() const {
    if (is_rational()) return std::to_string(coeffs_[0]);
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      Int c = coeffs_[k];
      if (c == 0) continue;
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      Int a = c < 0 ? -c : c;
      if (k == 0) {
        os << a;
      } else {
        if (a != 1) os << a << "*";
        os << "z";
        if (k != 1) os << "^" << k;
      }
      first = false;
    }
    os << " [z = e(1/" << order_ << ")]";
    return os.str();
  }

 private:
  static void check_cap(Int n, Int cap) {
    if (n > cap)
      throw OrderOverflow("cyclotomic order " + std::to_string(n) + " exceeds cap " +
                          std::to_string(cap));
  }

  void accumulate_lifted(std::vector<Int>& c, Int l, Int sign) const {
    const Int s = l / order_;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k] == 0) continue;
      auto& slot = c[static_cast<std::size_t>(static_cast<Int>(k) * s)];
      slot = arith::checked_add(slot, sign * coeffs_[k]);
    }
  }

  struct Axis {
    Int p;
    Int q;  // p^e
  };

  // Tensor layout: position = Σ j_i * stride_i, stride_0 = 1, stride_{i+1} = stride_i * q_i.
  static std::vector<Int> strides(const std::vector<Axis>& axes) {
    std::vector<Int> s(axes.size(), 1);
    for (std::size_t i = 1; i < axes.size(); ++i) s[i] = s[i - 1] * axes[i - 1].q;
    return s;
  }

  void canonicalize() {
    if (order_ == 1) return;
    std::vector<Axis> axes;
    for (const auto& f : arith::factorize(order_).factors)
      axes.push_back({f.prime, arith::checked_pow(f.prime, f.exponent)});

    // Exponent k -> tensor position.
    auto st = strides(axes);
    std::vector<Int> weight(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i)
      weight[i] = arith::inv(order_ / axes[i].q, axes[i].q);
    std::vector<Int> tensor(coeffs_.size(), 0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k] == 0) continue;
      Int pos = 0;
      for (std::size_t i = 0; i < axes.size(); ++i)
        pos += arith::mulmod(static_cast<Int>(k), weight[i], axes[i].q) * st[i];
      tensor[static_cast<std::size_t>(pos)] = coeffs_[k];
    }

    // Reduce along each axis.
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const Int p = axes[i].p, q = axes[i].q, m = q / p, phi = q - m;
      for (std::size_t pos = 0; pos < tensor.size(); ++pos) {
        Int c = tensor[pos];
        if (c == 0) continue;
        Int j = (static_cast<Int>(pos) / st[i]) % q;
        if (j < phi) continue;
        tensor[pos] = 0;
        Int base = static_cast<Int>(pos) - phi * st[i];  // same position with j -> j - phi
        for (Int r = 0; r + 1 < p; ++r) {
          auto& slot = tensor[static_cast<std::size_t>(base + r * m * st[i])];
          slot = arith::checked_sub(slot, c);
        }
      }
    }

    // Descend to the smallest order containing the value.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < axes.size(); ++i) {
        const Int p = axes[i].p, q = axes[i].q;
        const bool prime_axis = (q == p);
        bool ok = true;
        for (std::size_t pos = 0; pos < tensor.size() && ok; ++pos) {
          if (tensor[pos] == 0) continue;
          Int j = (static_cast<Int>(pos) / st[i]) % q;
          ok = prime_axis ? (j == 0) : (j % p == 0);
        }
        if (!ok) continue;
        std::vector<Axis> next = axes;
        if (prime_axis)
          next.erase(next.begin() + static_cast<std::ptrdiff_t>(i));
        else
          next[i].q = q / p;
        auto nst = strides(next);
        Int size = 1;
        for (const auto& a : next) size *= a.q;
        std::vector<Int> nt(static_cast<std::size_t>(size), 0);
        for (std::size_t pos = 0; pos < tensor.size(); ++pos) {
          if (tensor[pos] == 0) continue;
          Int npos = 0;
          std::size_t ni = 0;
          for (std::size_t a = 0; a < axes.size(); ++a) {
            Int j = (static_cast<Int>(pos) / st[a]) % axes[a].q;
            if (a == i) {
              if (prime_axis) continue;
              j /= p;
            }
            npos += j * nst[ni++];
          }
          nt[static_cast<std::size_t>(npos)] = tensor[pos];
        }
        axes = std::move(next);
        st = std::move(nst);
        tensor = std::move(nt);
        changed = true;
        break;
      }
    }

    // Tensor position -> exponent at the (possibly smaller) order.
    Int n = 1;
    for (const auto& a : axes) n *= a.q;
    std::vector<Int> out(static_cast<std::size_t>(n), 0);
    for (std::size_t pos = 0; pos < tensor.size(); ++pos) {
      if (tensor[pos] == 0) continue;
      Int k = 0;
      for (std::size_t a = 0; a < axes.size(); ++a) {
        Int j = (static_cast<Int>(pos) / st[a]) % axes[a].q;
        k = (k + j * (n / axes[a].q)) % n;
      }
      out[static_cast<std::size_t>(k)] = tensor[pos];
    }
    order_ = n;
    coeffs_ = std::move(out);
  }

  Int order_;
  std::vector<Int> coeffs_;
};

/// Sums e(k/N) over a list of exponents; the common building block of every
/// exponential sum in the library.
class PhaseAccumulator {
 public:
  explicit PhaseAccumulator(Int order) : order_(order), counts_(static_cast<std::size_t>(order), 0) {}
  void add(Int exponent, Int weight = 1) {
    auto& slot = counts_[static_cast<std::size_t>(arith::mod(exponent, order_))];
    slot += weight;
  }
  Int order() const { return order_; }
  CycInt value() const { return CycInt::from_exponent_counts(order_, counts_); }

 private:
  Int order_;
  std::vector<Int> counts_;
};

}  // namespace gl3ks

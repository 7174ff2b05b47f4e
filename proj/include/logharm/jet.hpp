#pragma once

// Truncated derivative jets of analytic functions of one complex variable.
//
// A Jet<N> at a basepoint p stores (f(p), f'(p), ..., f^(N)(p)). Arithmetic
// follows the Leibniz rule and composition with elementary functions uses
// Faa di Bruno, both truncated at order N. N is at most 3 throughout this
// library, which is all the Schwarzian needs.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include "logharm/error.hpp"

namespace logharm {

namespace detail {
inline constexpr std::array<std::array<double, 4>, 4> kBinomial{{
    {1, 0, 0, 0},
    {1, 1, 0, 0},
    {1, 2, 1, 0},
    {1, 3, 3, 1},
}};
}  // namespace detail

template <int N>
struct Jet {
  static_assert(N >= 0 && N <= 3, "jets are truncated at order 3");
  static constexpr int order = N;

  std::array<Complex, N + 1> d{};

  Jet() = default;

  static Jet constant(Complex c) {
    Jet j;
    j.d[0] = c;
    return j;
  }

  /// The identity function z, expanded at p.
  static Jet variable(Complex p) {
    Jet j;
    j.d[0] = p;
    if constexpr (N >= 1) j.d[1] = 1.0;
    return j;
  }

  Complex value() const { return d[0]; }
  Complex& operator[](int k) { return d[k]; }
  const Complex& operator[](int k) const { return d[k]; }

  bool is_constant() const {
    for (int k = 1; k <= N; ++k)
      if (d[k] != Complex{}) return false;
    return true;
  }

  Jet operator-() const {
    Jet r;
    for (int k = 0; k <= N; ++k) r.d[k] = -d[k];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= N; ++k) d[k] += o.d[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= N; ++k) d[k] -= o.d[k];
    return *this;
  }
  Jet& operator+=(Complex c) {
    d[0] += c;
    return *this;
  }
  Jet& operator-=(Complex c) {
    d[0] -= c;
    return *this;
  }
  Jet& operator*=(Complex c) {
    for (auto& x : d) x *= c;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, Complex c) { return a += c; }
  friend Jet operator+(Complex c, Jet a) { return a += c; }
  friend Jet operator-(Jet a, Complex c) { return a -= c; }
  friend Jet operator-(Complex c, const Jet& a) { return (-a) += c; }
  friend Jet operator*(Jet a, Complex c) { return a *= c; }
  friend Jet operator*(Complex c, Jet a) { return a *= c; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= N; ++k) {
      Complex s{};
      for (int j = 0; j <= k; ++j) s += detail::kBinomial[k][j] * a.d[j] * b.d[k - j];
      r.d[k] = s;
    }
    return r;
  }

  // q = a / b solves a = q b order by order.
  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.d[0] == Complex{}) raise(ErrorKind::PoleEncountered, "division by zero");
    Jet q;
    for (int k = 0; k <= N; ++k) {
      Complex s = a.d[k];
      for (int j = 0; j < k; ++j) s -= detail::kBinomial[k][j] * q.d[j] * b.d[k - j];
      q.d[k] = s / b.d[0];
    }
    return q;
  }

  friend Jet operator/(const Jet& a, Complex c) {
    if (c == Complex{}) raise(ErrorKind::PoleEncountered, "division by zero");
    Jet r = a;
    for (auto& x : r.d) x /= c;
    return r;
  }
  friend Jet operator/(Complex c, const Jet& b) { return Jet::constant(c) / b; }
};

using Jet3 = Jet<3>;

/// The jet of u' from the jet of u, losing one order.
template <int N>
Jet<N - 1> shift(const Jet<N>& u) {
  static_assert(N >= 1);
  Jet<N - 1> r;
  for (int k = 0; k < N; ++k) r.d[k] = u.d[k + 1];
  return r;
}

template <int M, int N>
Jet<M> truncate(const Jet<N>& u) {
  static_assert(M <= N);
  Jet<M> r;
  for (int k = 0; k <= M; ++k) r.d[k] = u.d[k];
  return r;
}

/// F(u) given the derivatives F, F', F'', F''' of F at u(p).
template <int N>
Jet<N> compose(const std::array<Complex, 4>& F, const Jet<N>& u) {
  Jet<N> r;
  r.d[0] = F[0];
  if constexpr (N >= 1) r.d[1] = F[1] * u.d[1];
  if constexpr (N >= 2) r.d[2] = F[2] * u.d[1] * u.d[1] + F[1] * u.d[2];
  if constexpr (N >= 3)
    r.d[3] = F[3] * u.d[1] * u.d[1] * u.d[1] + 3.0 * F[2] * u.d[1] * u.d[2] +
             F[1] * u.d[3];
  return r;
}

template <int N>
Jet<N> exp(const Jet<N>& u) {
  const Complex e = std::exp(u.d[0]);
  return compose<N>({e, e, e, e}, u);
}

/// Principal log with arg in (-pi, pi]; a signed zero imaginary part is
/// treated as +0 so that log(-1) = i pi whatever path produced -1.
inline Complex principal_log(Complex a) {
  if (a.imag() == 0.0) a = {a.real(), 0.0};
  return std::log(a);
}

/// Principal branch, log(1) = 0, cut along the negative real axis.
template <int N>
Jet<N> log(const Jet<N>& u) {
  const Complex a = u.d[0];
  if (a == Complex{}) raise(ErrorKind::PoleEncountered, "log of zero");
  const Complex inv = 1.0 / a;
  return compose<N>({principal_log(a), inv, -inv * inv, 2.0 * inv * inv * inv}, u);
}

/// Integer power by repeated squaring; u^1 returns u unchanged.
template <int N>
Jet<N> pow_int(const Jet<N>& u, std::int64_t n) {
  if (n == 0) return Jet<N>::constant(1.0);
  if (n < 0) {
    if (u.d[0] == Complex{}) raise(ErrorKind::PoleEncountered, "negative power of zero");
    return Complex{1.0} / pow_int(u, -n);
  }
  Jet<N> result;
  bool have = false;
  Jet<N> base = u;
  while (n > 0) {
    if (n & 1) {
      result = have ? result * base : base;
      have = true;
    }
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

/// u^c for a constant exponent, principal branch u^c = exp(c log u).
template <int N>
Jet<N> pow_const(const Jet<N>& u, Complex c) {
  const Complex a = u.d[0];
  if (a == Complex{}) raise(ErrorKind::PoleEncountered, "non-integer power of zero");
  const Complex la = principal_log(a);
  std::array<Complex, 4> F{};
  Complex falling = 1.0;
  for (int k = 0; k <= 3; ++k) {
    F[k] = falling * std::exp((c - double(k)) * la);
    falling *= (c - double(k));
  }
  return compose<N>(F, u);
}

/// The jet of z^c at p for a constant exponent c.
template <int N>
Jet<N> power_of_variable(Complex p, Complex c) {
  return pow_const(Jet<N>::variable(p), c);
}

}  // namespace logharm

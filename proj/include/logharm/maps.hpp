#pragma once

// Log-harmonic mappings f(z) = z^m |z|^{2 beta m} h(z) conj(g(z)) on the unit
// disk and their local differential quantities.
//
// Everything is assembled from order-3 jets of h and g at a single point:
//
//   H     = z h' + (beta+1) m h
//   G     = z^c g,         c = (2 Re(beta) + 1) m - 1
//   omega = (z g'/g + conj(beta) m) / ((beta+1) m + z h'/h)
//   J_f   = |H G|^2 (1 - |omega|^2)
//
// The analytic function phi with phi' = H G is never integrated; only its
// logarithmic derivative and Schwarzian are needed. For m = 0 the z^{-1}
// in G and the z in H cancel, so G = g, H = h' and omega = g' h / (g h').
//
// For real beta these are exactly the classical formulas. For complex beta,
// |z|^{2 beta m} = z^{beta m} conj(z^{conj(beta) m}), which is where the
// conj(beta) in omega and the Re(beta) in c come from.

#include <cmath>
#include <complex>
#include <string_view>
#include <utility>

#include "logharm/error.hpp"
#include "logharm/expr.hpp"
#include "logharm/jet.hpp"

namespace logharm {

/// Smallest |z| at which derivatives of a map with m >= 1 are evaluated.
inline constexpr double kPuncturedRadius = 1e-8;

class LogHarmonicMap {
 public:
  /// Throws InvalidMap unless Re(beta) > -1/2 and the normalisation holds:
  /// g(0) = 1, h(0) != 0 for m >= 1; g(0) != 0, h'(0) != 0 for m = 0.
  LogHarmonicMap(int m, Complex beta, Expr h, Expr g)
      : m_(m), beta_(beta), h_(std::move(h)), g_(std::move(g)) {
    validate();
  }

  static LogHarmonicMap from_strings(int m, Complex beta, std::string_view h,
                                     std::string_view g) {
    return LogHarmonicMap(m, beta, parse(h), parse(g));
  }

  /// The non-vanishing form f = h conj(g).
  static LogHarmonicMap nonvanishing(Expr h, Expr g) {
    return LogHarmonicMap(0, 0.0, std::move(h), std::move(g));
  }

  int m() const { return m_; }
  Complex beta() const { return beta_; }
  const Expr& h() const { return h_; }
  const Expr& g() const { return g_; }

  /// Real exponent of the z-power in G.
  double g_exponent() const { return (2.0 * beta_.real() + 1.0) * m_ - 1.0; }

  /// f(z) itself; f(0) = 0 when m >= 1.
  Complex value(Complex z) const {
    const Complex hg = h_(z) * std::conj(g_(z));
    if (m_ == 0) return hg;
    if (z == Complex{}) return {};
    const double r = std::abs(z);
    return std::pow(z, m_) * std::exp(2.0 * beta_ * double(m_) * std::log(r)) * hg;
  }

 private:
  void validate() const {
    if (m_ < 0) raise(ErrorKind::InvalidMap, "m must be a non-negative integer");
    if (!(beta_.real() > -0.5)) raise(ErrorKind::InvalidMap, "Re(beta) must exceed -1/2");
    Jet<1> h0, g0;
    try {
      h0 = h_.jet<1>(0.0);
      g0 = g_.jet<1>(0.0);
    } catch (const Error& e) {
      raise(ErrorKind::InvalidMap, std::string("h or g is singular at the origin: ") + e.what());
    }
    if (m_ >= 1) {
      if (std::abs(g0.value() - 1.0) > 1e-9) raise(ErrorKind::InvalidMap, "g(0) must equal 1");
      if (std::abs(h0.value()) <= 1e-9) raise(ErrorKind::InvalidMap, "h(0) must be nonzero");
    } else {
      if (std::abs(g0.value()) <= 1e-9) raise(ErrorKind::InvalidMap, "g(0) must be nonzero");
      if (std::abs(h0[1]) <= 1e-9)
        raise(ErrorKind::InvalidMap, "h'(0) must be nonzero (f not locally univalent at 0)");
    }
  }

  int m_;
  Complex beta_;
  Expr h_;
  Expr g_;
};

/// Everything the derivative formulas need at one point.
struct LocalData {
  Complex z;
  Complex omega, omega_d1, omega_d2;
  Jet<2> G_jet, H_jet;
  Complex phi_logderiv;  // P_phi = G'/G + H'/H
  double jacobian;
};

namespace detail {

template <int N>
Jet<N> variable_power(Complex z, double c) {
  if (c == std::trunc(c) && std::abs(c) <= 4096.0)
    return pow_int(Jet<N>::variable(z), static_cast<std::int64_t>(c));
  return pow_const(Jet<N>::variable(z), c);
}

struct Assembled {
  Jet<2> G, H, omega;
};

inline Assembled assemble(const LogHarmonicMap& f, Complex z) {
  const Jet3 h = f.h().jet<3>(z);
  const Jet3 g = f.g().jet<3>(z);
  const auto h2 = truncate<2>(h);
  const auto g2 = truncate<2>(g);
  if (f.m() == 0) {
    if (g.value() == Complex{}) raise(ErrorKind::PoleEncountered, "g vanishes", z);
    if (h[1] == Complex{}) raise(ErrorKind::CriticalPoint, "h' vanishes", z);
    return {g2, shift(h), (shift(g) * h2) / (g2 * shift(h))};
  }
  if (h.value() == Complex{} || g.value() == Complex{})
    raise(ErrorKind::PoleEncountered, "h or g vanishes", z);
  const double m = f.m();
  const Complex b1m = (f.beta() + 1.0) * m;
  const auto Z = Jet<2>::variable(z);
  const auto num = Z * (shift(g) / g2) + std::conj(f.beta()) * m;
  const auto den = Z * (shift(h) / h2) + b1m;
  if (den.value() == Complex{})
    raise(ErrorKind::DegenerateDenominator, "(beta+1)m + z h'/h vanishes", z);
  Jet<2> G;
  try {
    G = variable_power<2>(z, f.g_exponent()) * g2;
  } catch (const Error& e) {
    throw Error(ErrorKind::PoleEncountered, "z-power factor of G is singular", z);
  }
  return {G, Z * shift(h) + b1m * h2, num / den};
}

inline void require_punctured(const LogHarmonicMap& f, Complex z) {
  if (f.m() >= 1 && std::abs(z) < kPuncturedRadius)
    raise(ErrorKind::PoleEncountered, "derivatives of a vanishing map are not taken at the origin",
          z);
}

inline double one_minus_sq(Complex w) { return 1.0 - std::norm(w); }

struct Derivs {
  Complex w, w1, w2;
  Complex P_phi, S_phi;
};

inline Derivs derivs(const LogHarmonicMap& f, Complex z) {
  require_punctured(f, z);
  const Assembled a = assemble(f, z);
  if (a.G.value() == Complex{} || a.H.value() == Complex{})
    raise(ErrorKind::PoleEncountered, "phi' = H G vanishes", z);
  const Complex w = a.omega[0];
  if (std::norm(w) >= 1.0) raise(ErrorKind::NotSensePreserving, "|omega| >= 1", z);
  const Complex pg = a.G[1] / a.G[0], ph = a.H[1] / a.H[0];
  const Complex s = (a.G[2] / a.G[0] - 1.5 * pg * pg) + (a.H[2] / a.H[0] - 1.5 * ph * ph) -
                    pg * ph;
  return {w, a.omega[1], a.omega[2], pg + ph, s};
}

}  // namespace detail

/// Second complex dilatation omega(z).
inline Complex dilatation(const LogHarmonicMap& f, Complex z) {
  return detail::assemble(f, z).omega.value();
}

/// J_f = |f_z|^2 - |f_zbar|^2; positive exactly where f is locally univalent
/// and sense-preserving.
inline double jacobian(const LogHarmonicMap& f, Complex z) {
  if (f.m() >= 1 && z == Complex{}) {
    const double c = f.g_exponent();
    if (c < 0.0) raise(ErrorKind::PoleEncountered, "Jacobian has a pole at the origin", z);
    if (c > 0.0) return 0.0;
  }
  const auto a = detail::assemble(f, z);
  return std::norm(a.H.value() * a.G.value()) * detail::one_minus_sq(a.omega.value());
}

struct Wirtinger {
  Complex f_z, f_zbar, f_val;
};

/// Wirtinger derivatives from f = A conj(K), A = z^{(beta+1)m} h,
/// K = z^{conj(beta) m} g.
inline Wirtinger wirtinger(const LogHarmonicMap& f, Complex z) {
  detail::require_punctured(f, z);
  const Jet<1> h = f.h().jet<1>(z);
  const Jet<1> g = f.g().jet<1>(z);
  if (f.m() == 0) {
    return {h[1] * std::conj(g[0]), h[0] * std::conj(g[1]), h[0] * std::conj(g[0])};
  }
  const double m = f.m();
  const Complex a_exp = (f.beta() + 1.0) * m;
  const Complex k_exp = std::conj(f.beta()) * m;
  const Complex lz = principal_log(z);
  const Complex za = std::exp(a_exp * lz), zk = std::exp(k_exp * lz);
  const Complex A = za * h[0];
  const Complex dA = za / z * (a_exp * h[0] + z * h[1]);
  const Complex K = zk * g[0];
  const Complex dK = zk / z * (k_exp * g[0] + z * g[1]);
  return {dA * std::conj(K), A * std::conj(dK), A * std::conj(K)};
}

/// P_f = P_phi - conj(omega) omega' / (1 - |omega|^2).
inline Complex pre_schwarzian(const LogHarmonicMap& f, Complex z) {
  const auto d = detail::derivs(f, z);
  return d.P_phi - std::conj(d.w) * d.w1 / detail::one_minus_sq(d.w);
}

inline Complex schwarzian(const LogHarmonicMap& f, Complex z) {
  const auto d = detail::derivs(f, z);
  const double q = detail::one_minus_sq(d.w);
  const Complex t = std::conj(d.w) * d.w1 / q;
  return d.S_phi - 1.5 * t * t + std::conj(d.w) / q * (d.w1 * d.P_phi - d.w2);
}

struct PhiDerivatives {
  Complex P_phi, S_phi;
};

/// Pre-Schwarzian and Schwarzian of the analytic phi with phi' = H G.
inline PhiDerivatives phi_family(const LogHarmonicMap& f, Complex z) {
  detail::require_punctured(f, z);
  const auto a = detail::assemble(f, z);
  if (a.G.value() == Complex{} || a.H.value() == Complex{})
    raise(ErrorKind::PoleEncountered, "phi' = H G vanishes", z);
  const Complex pg = a.G[1] / a.G[0], ph = a.H[1] / a.H[0];
  const Complex s = (a.G[2] / a.G[0] - 1.5 * pg * pg) + (a.H[2] / a.H[0] - 1.5 * ph * ph) -
                    pg * ph;
  return {pg + ph, s};
}

inline LocalData local_data(const LogHarmonicMap& f, Complex z) {
  detail::require_punctured(f, z);
  const auto a = detail::assemble(f, z);
  LocalData out;
  out.z = z;
  out.omega = a.omega[0];
  out.omega_d1 = a.omega[1];
  out.omega_d2 = a.omega[2];
  out.G_jet = a.G;
  out.H_jet = a.H;
  out.phi_logderiv = a.G[1] / a.G[0] + a.H[1] / a.H[0];
  out.jacobian = std::norm(a.H[0] * a.G[0]) * detail::one_minus_sq(a.omega[0]);
  return out;
}

struct AnalyticDerivatives {
  Complex pre, schwarzian;
};

/// Classical f''/f' and f'''/f' - (3/2)(f''/f')^2; CriticalPoint where e' = 0.
inline AnalyticDerivatives analytic_derivatives(const Expr& e, Complex z) {
  const Jet3 j = e.jet<3>(z);
  if (j[1] == Complex{}) raise(ErrorKind::CriticalPoint, "derivative vanishes", z);
  const Complex p = j[2] / j[1];
  return {p, j[3] / j[1] - 1.5 * p * p};
}

inline Complex analytic_pre_schwarzian(const Expr& e, Complex z) {
  return analytic_derivatives(e, z).pre;
}

inline Complex analytic_schwarzian(const Expr& e, Complex z) {
  return analytic_derivatives(e, z).schwarzian;
}

namespace detail {
inline void require_nonvanishing_form(const LogHarmonicMap& f, const char* what) {
  if (f.m() != 0)
    raise(ErrorKind::InvalidArgument, std::string(what) + " needs a non-vanishing map (m = 0)");
}
}  // namespace detail

/// Classical pre-Schwarzian of h g^eps, |eps| <= 1, written through h, g
/// and omega:  h''/h' + g'/g + (eps-1) g'/g + eps omega' / (1 + eps omega).
inline Complex hg_epsilon_pre_schwarzian(const LogHarmonicMap& f, Complex eps, Complex z) {
  detail::require_nonvanishing_form(f, "hg^eps");
  if (std::abs(eps) > 1.0 + 1e-12) raise(ErrorKind::InvalidArgument, "|eps| must not exceed 1");
  const Jet3 h = f.h().jet<3>(z);
  const Jet<1> g = f.g().jet<1>(z);
  if (g[0] == Complex{}) raise(ErrorKind::PoleEncountered, "g vanishes", z);
  if (h[1] == Complex{}) raise(ErrorKind::CriticalPoint, "h' vanishes", z);
  const auto w = detail::assemble(f, z).omega;
  const Complex den = 1.0 + eps * w[0];
  if (den == Complex{}) raise(ErrorKind::DegenerateDenominator, "1 + eps omega vanishes", z);
  const Complex lg = g[1] / g[0];
  return h[2] / h[1] + lg + (eps - 1.0) * lg + eps * w[1] / den;
}

/// The analytic function h g^eps itself (principal branch of g^eps).
inline Expr hg_epsilon_expr(const LogHarmonicMap& f, Complex eps) {
  if (eps == Complex{1.0}) return f.h() * f.g();
  return f.h() * pow(f.g(), Expr::literal(eps));
}

/// d/dzbar of P_f:  -|omega'|^2 / (1 - |omega|^2)^2.
inline Complex dbar_pre_schwarzian(const LogHarmonicMap& f, Complex z) {
  const auto d = detail::derivs(f, z);
  const double q = detail::one_minus_sq(d.w);
  return -std::norm(d.w1) / (q * q);
}

/// d/dzbar of S_f:
///   conj(omega') [ (omega' P_phi - omega'') / q^2 - 3 omega'^2 conj(omega) / q^3 ],
/// q = 1 - |omega|^2.
inline Complex dbar_schwarzian(const LogHarmonicMap& f, Complex z) {
  const auto d = detail::derivs(f, z);
  const double q = detail::one_minus_sq(d.w);
  return std::conj(d.w1) *
         ((d.w1 * d.P_phi - d.w2) / (q * q) - 3.0 * d.w1 * d.w1 * std::conj(d.w) / (q * q * q));
}

/// Pre-Schwarzian of f o psi for an analytic, locally univalent psi mapping
/// into the disk:  (P_f o psi) psi' + P_psi.
inline Complex compose_with_analytic(const LogHarmonicMap& f, const Expr& psi, Complex z) {
  detail::require_nonvanishing_form(f, "composition");
  const Jet3 p = psi.jet<3>(z);
  if (p[1] == Complex{}) raise(ErrorKind::CriticalPoint, "psi' vanishes", z);
  if (std::abs(p[0]) >= 1.0) raise(ErrorKind::InvalidArgument, "psi(z) leaves the unit disk", z);
  return pre_schwarzian(f, p[0]) * p[1] + p[2] / p[1];
}

}  // namespace logharm

#pragma once

// Pointwise identities between the closed-form derivatives and
// finite-difference oracles. Checks (a) to (d) report the worst absolute
// error, (e) the worst relative error, over the given points.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "logharm/maps.hpp"
#include "oracles.hpp"

namespace identities {

using logharm::Complex;
using logharm::LogHarmonicMap;

inline constexpr double kStep = 1e-3;

// Maps with m >= 1 have P_f ~ c/z, so the step shrinks toward the origin to
// keep the fourth-order truncation error (h/|z|)^4 |S_f| small.
inline double step_at(Complex z) { return kStep * std::min(1.0, 2.0 * std::abs(z)); }

struct Worst {
  double error = 0.0;
  Complex at{};
  void offer(Complex computed, Complex reference, Complex z) {
    const double e = std::abs(computed - reference);
    if (!(e <= error)) {  // also catches NaN
      error = std::isnan(e) ? INFINITY : e;
      at = z;
    }
  }
};

struct Report {
  Worst pre_vs_log_jacobian;      // (a)
  Worst schwarzian_vs_pre;        // (b)
  Worst dbar_pre;                 // (c)
  Worst dbar_schwarzian;          // (d)
  Worst jacobian_vs_wirtinger;    // (e)
};

inline Report run(const LogHarmonicMap& f, const std::vector<Complex>& points) {
  Report r;
  const oracle::CField P = [&f](Complex p) { return logharm::pre_schwarzian(f, p); };
  const oracle::CField S = [&f](Complex p) { return logharm::schwarzian(f, p); };
  for (Complex z : points) {
    const double h = step_at(z);
    const Complex pf = P(z);
    r.pre_vs_log_jacobian.offer(pf, oracle::dz_log_jacobian(f, z, h), z);
    const auto dP = oracle::wirtinger(P, z, h);
    r.schwarzian_vs_pre.offer(S(z), dP.dz - 0.5 * pf * pf, z);
    r.dbar_pre.offer(logharm::dbar_pre_schwarzian(f, z), dP.dzbar, z);
    r.dbar_schwarzian.offer(logharm::dbar_schwarzian(f, z), oracle::wirtinger(S, z, h).dzbar, z);
    const auto w = logharm::wirtinger(f, z);
    const double j = logharm::jacobian(f, z);
    const double jw = std::norm(w.f_z) - std::norm(w.f_zbar);
    // relative, not floored at 1
    const double rel = std::abs(jw - j) / std::abs(j);
    if (!(rel <= r.jacobian_vs_wirtinger.error)) {
      r.jacobian_vs_wirtinger.error = std::isnan(rel) ? INFINITY : rel;
      r.jacobian_vs_wirtinger.at = z;
    }
  }
  return r;
}

}  // namespace identities

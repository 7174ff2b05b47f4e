#pragma once

// Sampled checks of univalence criteria, norm-gap inequalities and
// starlikeness. A "pass" means the sampled inequality holds everywhere on the
// grid, i.e. the criterion is satisfied up to sampling; it is never a proof.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logharm/error.hpp"
#include "logharm/expr.hpp"
#include "logharm/maps.hpp"
#include "logharm/norms.hpp"

namespace logharm {

/// Slack allowed at sample level for every pointwise inequality.
inline constexpr double kSampleSlack = 1e-9;

enum class Verdict { Pass, Fail, Inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct CheckReport {
  std::string criterion;
  Verdict verdict = Verdict::Inconclusive;
  Complex worst_point{};
  double worst_margin = 0.0;  // bound minus functional at worst_point; < 0 is a violation
  std::size_t samples = 0;
  std::size_t skipped = 0;
  std::string message;
  std::map<std::string, double> values;
};

namespace detail {

// Sweeps `excess` (functional minus bound) and turns the maximum into a
// verdict. The worst margin is -excess at the maximiser.
inline CheckReport excess_check(std::string name, const std::function<double(Complex)>& excess,
                                const GridSpec& grid, int workers, const std::string& pass_msg,
                                const std::string& fail_msg) {
  CheckReport rep;
  rep.criterion = std::move(name);
  try {
    const SweepResult s = maximize_on_disk(excess, grid, workers);
    rep.worst_point = s.argmax;
    rep.worst_margin = -s.value;
    rep.samples = s.samples;
    rep.skipped = s.skipped;
    rep.verdict = s.value <= kSampleSlack ? Verdict::Pass : Verdict::Fail;
    rep.message = rep.verdict == Verdict::Pass ? pass_msg : fail_msg;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::AllSamplesFailed) throw;
    rep.verdict = Verdict::Inconclusive;
    rep.samples = grid.sample_count();
    rep.skipped = rep.samples;
    rep.message = "every sample hit a singularity or a non-sense-preserving point";
  }
  return rep;
}

inline double one_minus_r2(Complex z) { return 1.0 - std::norm(z); }

}  // namespace detail

/// Becker: sup (1 - |z|^2) |z P_e(z)| <= 1 implies e is univalent.
inline CheckReport becker_check(const Expr& e, const GridSpec& grid = {},
                                int workers = default_worker_count()) {
  auto rep = detail::excess_check(
      "becker",
      [&e](Complex z) {
        return detail::one_minus_r2(z) * std::abs(z * analytic_pre_schwarzian(e, z)) - 1.0;
      },
      grid, workers, "criterion satisfied (sampled): univalent up to sampling",
      "criterion violated at the witness; this says nothing about univalence, the "
      "criterion is only sufficient");
  rep.values["sup"] = 1.0 - rep.worst_margin;
  return rep;
}

/// Nehari: ||S_e|| <= 2 implies univalence. Optional check, sampled.
inline CheckReport nehari_check(const Expr& e, const GridSpec& grid = {},
                                int workers = default_worker_count()) {
  auto rep = detail::excess_check(
      "nehari",
      [&e](Complex z) {
        const double w = detail::one_minus_r2(z);
        return w * w * std::abs(analytic_schwarzian(e, z)) - 2.0;
      },
      grid, workers, "criterion satisfied (sampled): univalent up to sampling",
      "criterion violated at the witness; the criterion is only sufficient");
  rep.values["sup"] = 2.0 - rep.worst_margin;
  return rep;
}

/// Left-hand side of the h g^eps univalence condition, weighted by
/// (1 - |z|^2):  (1-|z|^2) (|z P_f| + |1-eps| |z g'/g| + |z omega'| / (1-|omega|^2)).
inline double th4_functional(const LogHarmonicMap& f, Complex eps, Complex z) {
  const LocalData d = local_data(f, z);
  const double q = 1.0 - std::norm(d.omega);
  if (q <= 0.0) raise(ErrorKind::NotSensePreserving, "|omega| >= 1", z);
  const Jet<1> g = f.g().jet<1>(z);
  const Complex P = pre_schwarzian(f, z);
  return detail::one_minus_r2(z) * (std::abs(z * P) + std::abs(1.0 - eps) * std::abs(z * g[1] / g[0]) +
                                    std::abs(z * d.omega_d1) / q);
}

struct Th4Report {
  CheckReport condition;
  CheckReport becker_hg_eps;  // corroboration on h g^eps itself
};

/// Sampled check of the sufficient condition for univalence of h g^eps.
/// The conclusion concerns h g^eps, not f.
inline Th4Report th4_condition(const LogHarmonicMap& f, Complex eps, const GridSpec& grid = {},
                               int workers = default_worker_count()) {
  if (f.m() != 0) raise(ErrorKind::InvalidArgument, "th4 condition needs a non-vanishing map");
  if (std::abs(eps) > 1.0 + 1e-12) raise(ErrorKind::InvalidArgument, "|eps| must not exceed 1");
  Th4Report out;
  out.condition = detail::excess_check(
      "th4", [&](Complex z) { return th4_functional(f, eps, z) - 1.0; }, grid, workers,
      "condition satisfied (sampled): h g^eps is univalent by the Becker criterion",
      "condition violated at the witness; no conclusion about h g^eps");
  out.condition.values["eps_re"] = eps.real();
  out.condition.values["eps_im"] = eps.imag();
  out.becker_hg_eps = becker_check(hg_epsilon_expr(f, eps), grid, workers);
  return out;
}

struct GapReport {
  std::string criterion;
  Verdict verdict = Verdict::Inconclusive;
  NormEstimate norm_f;
  NormEstimate norm_other;  // ||P_{hg}|| or ||P_{hg^eps}||
  std::optional<NormEstimate> bloch_log_g;
  double gap = 0.0;
  double bound = 1.0;
  std::optional<double> loose_bound;  // 1 + 2 beta_{log g}
  std::string message;
};

/// | ||P_f|| - ||P_{hg}|| | <= 1.
inline GapReport gap_th0(const LogHarmonicMap& f, const GridSpec& grid = {},
                         int workers = default_worker_count()) {
  if (f.m() != 0) raise(ErrorKind::InvalidArgument, "gap_th0 needs a non-vanishing map");
  GapReport rep;
  rep.criterion = "gap-th0";
  rep.norm_f = pre_schwarzian_norm(f, grid, workers);
  rep.norm_other = hg_epsilon_norm(f, 1.0, grid, workers);
  rep.gap = std::abs(rep.norm_f.value - rep.norm_other.value);
  rep.bound = 1.0;
  if (rep.norm_f.diverged || rep.norm_other.diverged) {
    rep.verdict = Verdict::Inconclusive;
    rep.message = "a norm estimate diverged";
  } else {
    rep.verdict = rep.gap <= rep.bound + 2 * kNormTolerance ? Verdict::Pass : Verdict::Fail;
    rep.message = rep.verdict == Verdict::Pass ? "gap within bound (sampled)" : "gap exceeds bound";
  }
  return rep;
}

/// | ||P_f|| - ||P_{hg^eps}|| | <= 1 + |1-eps| beta_{log g} <= 1 + 2 beta_{log g}.
inline GapReport gap_th1(const LogHarmonicMap& f, Complex eps, const GridSpec& grid = {},
                         int workers = default_worker_count()) {
  if (f.m() != 0) raise(ErrorKind::InvalidArgument, "gap_th1 needs a non-vanishing map");
  GapReport rep;
  rep.criterion = "gap-th1";
  rep.norm_f = pre_schwarzian_norm(f, grid, workers);
  rep.norm_other = hg_epsilon_norm(f, eps, grid, workers);
  rep.bloch_log_g = bloch_norm_log(f.g(), grid, workers);
  const double beta = rep.bloch_log_g->value;
  rep.gap = std::abs(rep.norm_f.value - rep.norm_other.value);
  rep.bound = 1.0 + std::abs(1.0 - eps) * beta;
  rep.loose_bound = 1.0 + 2.0 * beta;
  if (rep.norm_f.diverged || rep.norm_other.diverged) {
    rep.verdict = Verdict::Inconclusive;
    rep.message = "a norm estimate diverged";
  } else {
    rep.verdict = rep.gap <= rep.bound + 2 * kNormTolerance ? Verdict::Pass : Verdict::Fail;
    rep.message = rep.verdict == Verdict::Pass ? "gap within bound (sampled)" : "gap exceeds bound";
  }
  return rep;
}

struct Cor5Report {
  CheckReport hypothesis;
  std::optional<NormEstimate> norm_f;
  Verdict verdict = Verdict::Inconclusive;
  std::string message;
};

/// When the eps = 1 condition holds, h g is univalent and ||P_f|| <= 7.
inline Cor5Report cor_th5_bound(const LogHarmonicMap& f, const GridSpec& grid = {},
                                int workers = default_worker_count()) {
  if (f.m() != 0) raise(ErrorKind::InvalidArgument, "cor_th5_bound needs a non-vanishing map");
  Cor5Report rep;
  rep.hypothesis = detail::excess_check(
      "cor-th5-hypothesis", [&](Complex z) { return th4_functional(f, 1.0, z) - 1.0; }, grid,
      workers, "hypothesis satisfied (sampled)", "hypothesis violated; bound not claimed");
  if (rep.hypothesis.verdict != Verdict::Pass) {
    rep.verdict = Verdict::Inconclusive;
    rep.message = "hypothesis fails on the grid; the bound ||P_f|| <= 7 is not claimed";
    return rep;
  }
  rep.norm_f = pre_schwarzian_norm(f, grid, workers);
  rep.verdict = rep.norm_f->value <= 7.0 + kNormTolerance ? Verdict::Pass : Verdict::Fail;
  rep.message = rep.verdict == Verdict::Pass ? "||P_f|| <= 7 confirmed (sampled)"
                                             : "||P_f|| exceeds 7 although the hypothesis holds";
  return rep;
}

/// Re((z f_z - conj(z) f_zbar) / f) in closed form:
///   (beta+1) m + z h'/h - conj(conj(beta) m + z g'/g).
/// Only h and g are divided by, so zeros of f at the origin do no harm.
inline Complex starlike_functional(const LogHarmonicMap& f, Complex z) {
  const Jet<1> h = f.h().jet<1>(z);
  const Jet<1> g = f.g().jet<1>(z);
  if (std::abs(h[0]) < 1e-12 || std::abs(g[0]) < 1e-12)
    raise(ErrorKind::ZeroEncountered, "h or g vanishes at the sample", z);
  const double m = f.m();
  return (f.beta() + 1.0) * m + z * h[1] / h[0] - std::conj(std::conj(f.beta()) * m + z * g[1] / g[0]);
}

/// The same functional computed directly from the Wirtinger derivatives.
inline Complex starlike_functional_wirtinger(const LogHarmonicMap& f, Complex z) {
  const Wirtinger w = wirtinger(f, z);
  if (std::abs(w.f_val) < 1e-300) raise(ErrorKind::ZeroEncountered, "f vanishes", z);
  return (z * w.f_z - std::conj(z) * w.f_zbar) / w.f_val;
}

inline GridSpec punctured(GridSpec grid) {
  grid.r_min = std::max(grid.r_min, kAnnulusInnerRadius);
  return grid;
}

/// Starlikeness with respect to the origin, sampled on the punctured disk.
inline CheckReport starlike_check(const LogHarmonicMap& f, const GridSpec& grid = {},
                                  int workers = default_worker_count()) {
  auto rep = detail::excess_check(
      "starlike", [&f](Complex z) { return -starlike_functional(f, z).real(); }, punctured(grid),
      workers, "starlike with respect to the origin (sampled)",
      "the starlikeness functional is negative at the witness");
  rep.values["min_functional"] = rep.worst_margin;
  return rep;
}

/// Re(z e'/e) > 0 on the punctured disk: analytic starlikeness.
inline CheckReport analytic_starlike_check(const Expr& e, const GridSpec& grid = {},
                                           int workers = default_worker_count()) {
  auto rep = detail::excess_check(
      "analytic-starlike",
      [&e](Complex z) {
        const Jet<1> j = e.jet<1>(z);
        if (std::abs(j[0]) < 1e-300) raise(ErrorKind::ZeroEncountered, "function vanishes", z);
        return -(z * j[1] / j[0]).real();
      },
      punctured(grid), workers, "starlike (sampled)",
      "Re(z phi'/phi) is negative at the witness");
  rep.values["min_functional"] = rep.worst_margin;
  return rep;
}

struct PhiReport {
  Expr phi;
  CheckReport starlike;
};

/// phi(z) = z h(z) / g(z) for a map vanishing at the origin, with its
/// sampled starlikeness.
inline PhiReport theorem_a_phi(const LogHarmonicMap& f, const GridSpec& grid = {},
                               int workers = default_worker_count()) {
  if (f.m() < 1) raise(ErrorKind::InvalidArgument, "phi = z h / g is defined for maps with m >= 1");
  PhiReport out{Expr::variable() * (f.h() / f.g()), {}};
  out.starlike = analytic_starlike_check(out.phi, grid, workers);
  return out;
}

/// Schwarz-Pick for an analytic self-map omega of the disk:
/// |omega'| <= (1 - |omega|^2) / (1 - |z|^2). Fails first if omega leaves the disk.
inline CheckReport schwarz_pick_check(const Expr& omega, const GridSpec& grid = {},
                                      int workers = default_worker_count()) {
  CheckReport rep;
  const SweepResult mod = maximize_on_disk([&](Complex z) { return std::abs(omega(z)); }, grid, workers);
  if (mod.value >= 1.0) {
    rep.criterion = "schwarz-pick";
    rep.verdict = Verdict::Fail;
    rep.worst_point = mod.argmax;
    rep.worst_margin = 1.0 - mod.value;
    rep.samples = mod.samples;
    rep.skipped = mod.skipped;
    rep.message = "omega is not a self-map of the disk: |omega| >= 1 at the witness";
    rep.values["max_modulus"] = mod.value;
    return rep;
  }
  rep = detail::excess_check(
      "schwarz-pick",
      [&omega](Complex z) {
        const Jet<1> j = omega.jet<1>(z);
        return std::abs(j[1]) - (1.0 - std::norm(j[0])) / (1.0 - std::norm(z));
      },
      grid, workers, "Schwarz-Pick inequality holds (sampled)",
      "Schwarz-Pick inequality violated at the witness");
  rep.values["max_modulus"] = mod.value;
  return rep;
}

struct InjectivityProbe {
  bool injective = true;
  std::size_t points = 0;
  double min_separation = std::numeric_limits<double>::infinity();
  Complex a{}, b{};  // closest pair of distinct sample points
};

/// Samples e on a polar grid and looks for two distinct points whose images
/// lie within `tol` of each other.
inline InjectivityProbe injectivity_probe(const Expr& e, int radial, int angular,
                                          double r_max = 0.99, double tol = 1e-9) {
  struct Sample {
    Complex z, w;
  };
  std::vector<Sample> pts;
  for (int i = 1; i <= radial; ++i)
    for (int j = 0; j < angular; ++j) {
      const Complex z = std::polar(r_max * i / radial, 2.0 * std::numbers::pi * j / angular);
      try {
        pts.push_back({z, e(z)});
      } catch (const Error& err) {
        if (!err.is_sample_failure()) throw;
      }
    }
  std::sort(pts.begin(), pts.end(), [](const Sample& x, const Sample& y) { return x.w.real() < y.w.real(); });
  InjectivityProbe out;
  out.points = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = i + 1; k < pts.size() && pts[k].w.real() - pts[i].w.real() < out.min_separation;
         ++k) {
      const double d = std::abs(pts[k].w - pts[i].w);
      if (d < out.min_separation) {
        out.min_separation = d;
        out.a = pts[i].z;
        out.b = pts[k].z;
      }
    }
  }
  out.injective = !(out.min_separation <= tol);
  return out;
}

}  // namespace logharm

#pragma once

// Hyperbolically weighted sup-norms over the unit disk,
//
//   sup_{|z|<1} (1 - |z|^2)^k |F(z)|,   k = 1 (pre-Schwarzian, Bloch) or 2,
//
// estimated by a polar sweep followed by golden-section refinement around
// the best sample. The radii approach the boundary geometrically because
// every supremum of interest is attained or approached as |z| -> 1. The
// result is a lower bound only: it is a value actually attained at the
// reported argmax.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "logharm/error.hpp"
#include "logharm/expr.hpp"
#include "logharm/maps.hpp"

namespace logharm {

/// Each geometric level [1 - 2^{-ks}, 1 - 2^{-(k+1)s}] is split evenly into
/// this many radial steps.
inline constexpr int kRadialSubsteps = 5;

/// Inner radius of the punctured annulus used for maps vanishing at 0.
inline constexpr double kAnnulusInnerRadius = 1e-3;

/// Accuracy target of a default-grid norm estimate.
inline constexpr double kNormTolerance = 0.01;

struct GridSpec {
  int radial_levels = 40;
  double r_max = 1.0 - 1e-6;
  int angular_count = 512;
  int refine_rounds = 3;
  double r_min = 0.0;  // radii below this are replaced by r_min itself

  void validate() const {
    if (radial_levels < 1) raise(ErrorKind::InvalidArgument, "radial_levels must be positive");
    if (!(r_max > 0.0) || r_max > 1.0 - 1e-6 + 1e-15)
      raise(ErrorKind::InvalidArgument, "r_max must lie in (0, 1 - 1e-6]");
    if (angular_count < 8) raise(ErrorKind::InvalidArgument, "angular_count must be at least 8");
    if (refine_rounds < 0) raise(ErrorKind::InvalidArgument, "refine_rounds must be >= 0");
    if (r_min < 0.0 || r_min >= r_max)
      raise(ErrorKind::InvalidArgument, "r_min must lie in [0, r_max)");
  }

  /// Radii r_0 = 0 < ... < r_max with level boundaries 1 - 2^{-ks}.
  std::vector<double> radii() const {
    validate();
    const double s = std::log2(1.0 / (1.0 - r_max)) / radial_levels;
    std::vector<double> out{0.0};
    for (int k = 0; k < radial_levels; ++k) {
      const double lo = 1.0 - std::exp2(-k * s);
      const double hi = k + 1 == radial_levels ? r_max : 1.0 - std::exp2(-(k + 1) * s);
      for (int j = 1; j <= kRadialSubsteps; ++j)
        out.push_back(lo + (hi - lo) * j / kRadialSubsteps);
    }
    if (r_min > 0.0) {
      std::erase_if(out, [&](double r) { return r <= r_min; });
      out.insert(out.begin(), r_min);
    }
    return out;
  }

  double angle(int j) const { return 2.0 * std::numbers::pi * j / angular_count; }

  std::size_t sample_count() const { return radii().size() * std::size_t(angular_count); }
};

/// LOGHARM_THREADS if set, else the hardware concurrency.
inline int default_worker_count() {
  if (const char* env = std::getenv("LOGHARM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct SweepResult {
  double value = -std::numeric_limits<double>::infinity();
  Complex argmax{};
  std::size_t samples = 0;
  std::size_t skipped = 0;
  std::vector<double> round_values;  // best value after the sweep, then after each round
};

namespace detail {

inline bool try_eval(const std::function<double(Complex)>& fn, Complex z, double& out) {
  try {
    out = fn(z);
  } catch (const Error& e) {
    if (!e.is_sample_failure()) throw;
    return false;
  }
  return std::isfinite(out);
}

struct Best {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t ri = 0, aj = 0;
  Complex z{};
  bool found = false;
  std::size_t skipped = 0;

  // Higher value wins; ties go to the lexicographically smaller (r, theta).
  void offer(double v, std::size_t i, std::size_t j, Complex at) {
    if (!found || v > value || (v == value && std::pair(i, j) < std::pair(ri, aj))) {
      value = v;
      ri = i;
      aj = j;
      z = at;
      found = true;
    }
  }
};

template <class F>
std::pair<double, double> golden_max(F&& phi, double a, double b) {
  constexpr double inv = 0.6180339887498949;
  double x1 = b - inv * (b - a), x2 = a + inv * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  for (int it = 0; it < 90 && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv * (b - a);
      f2 = phi(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv * (b - a);
      f1 = phi(x1);
    }
  }
  return f1 >= f2 ? std::pair(x1, f1) : std::pair(x2, f2);
}

}  // namespace detail

/// Maximises a real functional over the polar grid, then refines.
/// Deterministic for any worker count.
inline SweepResult maximize_on_disk(const std::function<double(Complex)>& fn, const GridSpec& grid,
                                    int workers = default_worker_count()) {
  const std::vector<double> radii = grid.radii();
  const std::size_t nr = radii.size(), na = std::size_t(grid.angular_count);
  workers = std::clamp(workers, 1, int(nr));

  std::vector<detail::Best> partial(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto run = [&](int w) {
    try {
      const std::size_t lo = nr * std::size_t(w) / std::size_t(workers);
      const std::size_t hi = nr * std::size_t(w + 1) / std::size_t(workers);
      auto& best = partial[std::size_t(w)];
      for (std::size_t i = lo; i < hi; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
          const Complex z = std::polar(radii[i], grid.angle(int(j)));
          double v;
          if (detail::try_eval(fn, z, v)) best.offer(v, i, j, z);
          else ++best.skipped;
        }
      }
    } catch (...) {
      errors[std::size_t(w)] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  detail::Best best;
  for (const auto& p : partial) {
    best.skipped += p.skipped;
    if (p.found) best.offer(p.value, p.ri, p.aj, p.z);
  }
  SweepResult out;
  out.samples = nr * na;
  out.skipped = best.skipped;
  if (!best.found) raise(ErrorKind::AllSamplesFailed, "every grid sample hit a singularity");
  out.value = best.value;
  out.argmax = best.z;
  out.round_values.push_back(best.value);

  const double r_floor = grid.r_min;
  double r = radii[best.ri];
  double theta = grid.angle(int(best.aj));
  const double r_lo = best.ri > 0 ? radii[best.ri - 1] : r_floor;
  const double r_hi = best.ri + 1 < nr ? radii[best.ri + 1] : grid.r_max;
  const double dtheta = 2.0 * std::numbers::pi / grid.angular_count;
  auto eval_or_low = [&](Complex z) {
    double v;
    return detail::try_eval(fn, z, v) ? v : -std::numeric_limits<double>::infinity();
  };
  auto accept = [&](double rr, double tt) {
    const Complex z = std::polar(rr, tt);
    const double v = eval_or_low(z);
    if (v > out.value) {
      out.value = v;
      out.argmax = z;
      r = rr;
      theta = tt;
    }
  };
  for (int round = 0; round < grid.refine_rounds; ++round) {
    const double scale = std::ldexp(1.0, -round);
    const double a = std::max(r_floor, r - scale * (r - r_lo));
    const double b = std::min(grid.r_max, r + scale * (r_hi - r));
    if (b > a) {
      const double th = theta;
      const auto [rr, v] = detail::golden_max([&](double t) { return eval_or_low(std::polar(t, th)); },
                                              a, b);
      if (v > out.value) accept(rr, th);
    }
    const double rr = r;
    const auto [tt, v] = detail::golden_max(
        [&](double t) { return eval_or_low(std::polar(rr, t)); }, theta - scale * dtheta,
        theta + scale * dtheta);
    if (v > out.value) accept(rr, tt);
    out.round_values.push_back(out.value);
  }
  return out;
}

struct NormEstimate {
  double value = 0.0;
  Complex argmax{};
  GridSpec grid;
  bool diverged = false;
  bool flagged = false;  // more than 1% of samples skipped
  std::size_t samples = 0;
  std::size_t skipped = 0;
  std::vector<double> round_values;
};

using ComplexField = std::function<Complex(Complex)>;

inline double weight(Complex z, int weight_power) {
  const double w = 1.0 - std::norm(z);
  return weight_power == 2 ? w * w : w;
}

/// sup (1 - |z|^2)^weight_power |field(z)| as a certified lower bound.
inline NormEstimate weighted_sup(const ComplexField& field, int weight_power, const GridSpec& grid,
                                 int workers = default_worker_count()) {
  if (weight_power != 1 && weight_power != 2)
    raise(ErrorKind::InvalidArgument, "weight_power must be 1 or 2");
  const auto sweep = maximize_on_disk(
      [&](Complex z) { return weight(z, weight_power) * std::abs(field(z)); }, grid, workers);
  NormEstimate est;
  est.value = sweep.value;
  est.argmax = sweep.argmax;
  est.grid = grid;
  est.samples = sweep.samples;
  est.skipped = sweep.skipped;
  est.flagged = sweep.skipped * 100 > sweep.samples;
  est.round_values = sweep.round_values;
  return est;
}

namespace detail {

/// Whether the weighted field blows up toward the origin: probes rings at
/// |z| = 1e-2, 1e-4, 1e-6, 1e-8 and looks for 1/z-type growth.
inline bool diverges_at_origin(const ComplexField& field, int weight_power) {
  std::vector<double> ring_max;
  for (double r : {1e-2, 1e-4, 1e-6, 1e-8}) {
    double best = 0.0;
    for (int j = 0; j < 16; ++j) {
      double v;
      const Complex z = std::polar(r, 2.0 * std::numbers::pi * j / 16);
      if (try_eval([&](Complex q) { return weight(q, weight_power) * std::abs(field(q)); }, z, v))
        best = std::max(best, v);
    }
    ring_max.push_back(best);
  }
  if (ring_max.back() > 1e9) return true;
  for (std::size_t k = 1; k < ring_max.size(); ++k)
    if (!(ring_max[k] >= 50.0 * ring_max[k - 1])) return false;
  return true;
}

inline NormEstimate map_norm(const LogHarmonicMap& f, const ComplexField& field, int weight_power,
                             GridSpec grid, int workers) {
  if (f.m() >= 1) grid.r_min = std::max(grid.r_min, kAnnulusInnerRadius);
  NormEstimate est = weighted_sup(field, weight_power, grid, workers);
  if (f.m() >= 1) est.diverged = diverges_at_origin(field, weight_power);
  return est;
}

}  // namespace detail

/// ||P_f|| = sup (1 - |z|^2) |P_f|. For m >= 1 the sweep covers the annulus
/// [1e-3, r_max] and `diverged` reports a non-removable pole at the origin.
inline NormEstimate pre_schwarzian_norm(const LogHarmonicMap& f, const GridSpec& grid = {},
                                        int workers = default_worker_count()) {
  return detail::map_norm(
      f, [&f](Complex z) { return pre_schwarzian(f, z); }, 1, grid, workers);
}

inline NormEstimate schwarzian_norm(const LogHarmonicMap& f, const GridSpec& grid = {},
                                    int workers = default_worker_count()) {
  return detail::map_norm(
      f, [&f](Complex z) { return schwarzian(f, z); }, 2, grid, workers);
}

inline NormEstimate analytic_pre_schwarzian_norm(const Expr& e, const GridSpec& grid = {},
                                                 int workers = default_worker_count()) {
  return weighted_sup([&e](Complex z) { return analytic_pre_schwarzian(e, z); }, 1, grid, workers);
}

inline NormEstimate analytic_schwarzian_norm(const Expr& e, const GridSpec& grid = {},
                                             int workers = default_worker_count()) {
  return weighted_sup([&e](Complex z) { return analytic_schwarzian(e, z); }, 2, grid, workers);
}

/// ||P_{h g^eps}||. Differentiates h g^eps directly: the h, g, omega form
/// cancels catastrophically near the boundary when h g^eps is simple.
inline NormEstimate hg_epsilon_norm(const LogHarmonicMap& f, Complex eps, const GridSpec& grid = {},
                                    int workers = default_worker_count()) {
  if (f.m() != 0) raise(ErrorKind::InvalidArgument, "hg^eps needs a non-vanishing map");
  if (std::abs(eps) > 1.0 + 1e-12) raise(ErrorKind::InvalidArgument, "|eps| must not exceed 1");
  const Expr e = hg_epsilon_expr(f, eps);
  return weighted_sup([e](Complex z) { return analytic_pre_schwarzian(e, z); }, 1, grid, workers);
}

/// Bloch seminorm of log g:  sup (1 - |z|^2) |g'/g|.
inline NormEstimate bloch_norm_log(const Expr& g, const GridSpec& grid = {},
                                   int workers = default_worker_count()) {
  return weighted_sup(
      [&g](Complex z) {
        const Jet<1> j = g.jet<1>(z);
        if (j[0] == Complex{}) raise(ErrorKind::PoleEncountered, "g vanishes", z);
        return j[1] / j[0];
      },
      1, grid, workers);
}

struct RadialProfile {
  std::vector<std::pair<double, double>> rows;  // (r, weighted magnitude)
  std::size_t skipped = 0;
  bool monotone_tail = false;
  double boundary_limit = std::numeric_limits<double>::quiet_NaN();  // set when monotone_tail
};

/// (1 - r^2)^k |field(r)| on `samples` evenly spaced radii of [0, r_max]
/// along the positive real axis. When the last tenth of the table is
/// monotone the r -> 1 limit is extrapolated linearly from the last two rows.
inline RadialProfile radial_profile(const ComplexField& field, int weight_power, int samples,
                                    double r_max = 1.0 - 1e-6) {
  if (samples < 3) raise(ErrorKind::InvalidArgument, "need at least 3 profile samples");
  if (!(r_max > 0.0 && r_max < 1.0)) raise(ErrorKind::InvalidArgument, "r_max must lie in (0, 1)");
  if (weight_power != 1 && weight_power != 2)
    raise(ErrorKind::InvalidArgument, "weight_power must be 1 or 2");
  RadialProfile out;
  for (int k = 0; k < samples; ++k) {
    const double r = r_max * k / (samples - 1);
    double v;
    if (detail::try_eval([&](Complex z) { return weight(z, weight_power) * std::abs(field(z)); },
                         Complex{r, 0.0}, v))
      out.rows.emplace_back(r, v);
    else
      ++out.skipped;
  }
  const std::size_t n = out.rows.size();
  const std::size_t tail = std::max<std::size_t>(3, n / 10);
  if (n >= tail && n >= 3) {
    bool up = true, down = true;
    for (std::size_t k = n - tail + 1; k < n; ++k) {
      up = up && out.rows[k].second >= out.rows[k - 1].second;
      down = down && out.rows[k].second <= out.rows[k - 1].second;
    }
    out.monotone_tail = up || down;
    if (out.monotone_tail) {
      const auto [r1, v1] = out.rows[n - 2];
      const auto [r2, v2] = out.rows[n - 1];
      out.boundary_limit = v2 + (v2 - v1) * (1.0 - r2) / (r2 - r1);
    }
  }
  return out;
}

}  // namespace logharm

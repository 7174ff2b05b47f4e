#pragma once

// Images of the unit disk under an analytic expression or a log-harmonic
// map, written as a CSV point cloud or a binary PPM (P6) raster.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <complex>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "logharm/error.hpp"
#include "logharm/expr.hpp"
#include "logharm/maps.hpp"
#include "logharm/norms.hpp"

namespace logharm {

enum class RenderFormat { Csv, Ppm };

inline constexpr int kMinRenderRadial = 32;
inline constexpr int kMinRenderAngular = 64;

struct RenderJob {
  std::variant<Expr, LogHarmonicMap> target;
  int radial = 64;
  int angular = 128;
  double r_max = 0.99;
  RenderFormat format = RenderFormat::Csv;
  std::string path;  // empty: caller supplies a stream
  int width = 512;
  int height = 512;
  bool color_by_field = false;  // color by (1-|z|^2)|P| instead of by source angle

  void validate() const {
    if (radial < kMinRenderRadial || angular < kMinRenderAngular)
      raise(ErrorKind::InvalidArgument, "render resolution must be at least 32 x 64");
    if (!(r_max > 0.0 && r_max < 1.0)) raise(ErrorKind::InvalidArgument, "r_max must lie in (0, 1)");
    if (width < 1 || height < 1) raise(ErrorKind::InvalidArgument, "image size must be positive");
  }

  /// Radii 0 = r_0 < ... < r_{radial-1} = r_max with 1 - r_k geometric.
  std::vector<double> radii() const {
    std::vector<double> out(static_cast<std::size_t>(radial));
    for (int k = 0; k < radial; ++k)
      out[std::size_t(k)] = k == 0 ? 0.0 : 1.0 - std::pow(1.0 - r_max, double(k) / (radial - 1));
    return out;
  }

  /// The origin contributes a single point.
  std::size_t mesh_size() const { return 1 + std::size_t(radial - 1) * std::size_t(angular); }
};

struct RenderRow {
  double r, theta;
  Complex z, w;
  double field = std::numeric_limits<double>::quiet_NaN();
};

struct RenderSummary {
  std::size_t rows = 0;
  std::size_t skipped = 0;
  double min_re = 0, max_re = 0, min_im = 0, max_im = 0;
  double max_modulus = 0;
  Complex max_modulus_at{};
};

inline Complex render_value(const std::variant<Expr, LogHarmonicMap>& target, Complex z) {
  if (const auto* e = std::get_if<Expr>(&target)) return (*e)(z);
  return std::get<LogHarmonicMap>(target).value(z);
}

inline double render_field(const std::variant<Expr, LogHarmonicMap>& target, Complex z) {
  const double w = 1.0 - std::norm(z);
  if (const auto* e = std::get_if<Expr>(&target)) return w * std::abs(analytic_pre_schwarzian(*e, z));
  return w * std::abs(pre_schwarzian(std::get<LogHarmonicMap>(target), z));
}

/// Evaluates the mesh; rows come out sorted by (r, theta). Samples that hit
/// a singularity are dropped and counted.
inline std::vector<RenderRow> render_points(const RenderJob& job, std::size_t* skipped = nullptr,
                                            int workers = default_worker_count()) {
  job.validate();
  const std::vector<double> radii = job.radii();
  const std::size_t n = job.mesh_size();
  std::vector<std::optional<RenderRow>> slots(n);
  auto index_point = [&](std::size_t idx) {
    if (idx == 0) return std::pair{0.0, 0.0};
    const std::size_t k = 1 + (idx - 1) / std::size_t(job.angular);
    const std::size_t j = (idx - 1) % std::size_t(job.angular);
    return std::pair{radii[k], 2.0 * std::numbers::pi * double(j) / job.angular};
  };
  std::vector<std::exception_ptr> errors;
  workers = std::clamp(workers, 1, int(std::min<std::size_t>(n, 64)));
  errors.resize(std::size_t(workers));
  auto run = [&](int w) {
    try {
      for (std::size_t idx = std::size_t(w); idx < n; idx += std::size_t(workers)) {
        const auto [r, t] = index_point(idx);
        const Complex z = std::polar(r, t);
        try {
          RenderRow row{r, t, z, render_value(job.target, z)};
          if (!std::isfinite(row.w.real()) || !std::isfinite(row.w.imag())) continue;
          if (job.color_by_field) {
            try {
              row.field = render_field(job.target, z);
            } catch (const Error& e) {
              if (!e.is_sample_failure()) throw;
            }
          }
          slots[idx] = row;
        } catch (const Error& e) {
          if (!e.is_sample_failure()) throw;
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

  std::vector<RenderRow> rows;
  rows.reserve(n);
  for (auto& s : slots)
    if (s) rows.push_back(*s);
  if (skipped) *skipped = n - rows.size();
  return rows;
}

inline RenderSummary summarize(const std::vector<RenderRow>& rows, std::size_t skipped) {
  RenderSummary s;
  s.rows = rows.size();
  s.skipped = skipped;
  if (rows.empty()) return s;
  s.min_re = s.max_re = rows.front().w.real();
  s.min_im = s.max_im = rows.front().w.imag();
  for (const auto& r : rows) {
    s.min_re = std::min(s.min_re, r.w.real());
    s.max_re = std::max(s.max_re, r.w.real());
    s.min_im = std::min(s.min_im, r.w.imag());
    s.max_im = std::max(s.max_im, r.w.imag());
    if (std::abs(r.w) > s.max_modulus) {
      s.max_modulus = std::abs(r.w);
      s.max_modulus_at = r.z;
    }
  }
  return s;
}

inline void write_csv(std::ostream& os, const std::vector<RenderRow>& rows, bool with_field) {
  os << "z_re,z_im,w_re,w_im" << (with_field ? ",field" : "") << '\n';
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", r.z.real(), r.z.imag(), r.w.real(),
                  r.w.imag());
    os << buf;
    if (with_field) {
      std::snprintf(buf, sizeof buf, ",%.17g", r.field);
      os << buf;
    }
    os << '\n';
  }
}

namespace detail {

struct Rgb {
  unsigned char r, g, b;
};

// Piecewise-linear hue wheel, t in [0, 1).
inline Rgb hue(double t) {
  t = t - std::floor(t);
  const double h = t * 6.0;
  const double x = 1.0 - std::abs(std::fmod(h, 2.0) - 1.0);
  double r = 0, g = 0, b = 0;
  switch (int(h)) {
    case 0: r = 1, g = x; break;
    case 1: r = x, g = 1; break;
    case 2: g = 1, b = x; break;
    case 3: g = x, b = 1; break;
    case 4: r = x, b = 1; break;
    default: r = 1, b = x; break;
  }
  auto c = [](double v) { return static_cast<unsigned char>(std::lround(40 + 200 * v)); };
  return {c(r), c(g), c(b)};
}

}  // namespace detail

/// Rasterizes the image point set into the summary's bounding box (square
/// aspect, 2% margin) on a white background.
inline void write_ppm(std::ostream& os, const std::vector<RenderRow>& rows, const RenderSummary& s,
                      int width, int height, bool color_by_field) {
  std::vector<unsigned char> pix(std::size_t(width) * std::size_t(height) * 3, 255);
  const double cx = 0.5 * (s.min_re + s.max_re), cy = 0.5 * (s.min_im + s.max_im);
  double half = 0.5 * std::max(s.max_re - s.min_re, s.max_im - s.min_im) * 1.02;
  if (!(half > 0.0)) half = 1.0;
  double fmax = 0.0;
  if (color_by_field)
    for (const auto& r : rows)
      if (std::isfinite(r.field)) fmax = std::max(fmax, r.field);
  for (const auto& r : rows) {
    const double u = (r.w.real() - (cx - half)) / (2 * half);
    const double v = ((cy + half) - r.w.imag()) / (2 * half);
    const long px = std::lround(u * (width - 1)), py = std::lround(v * (height - 1));
    if (px < 0 || py < 0 || px >= width || py >= height) continue;
    detail::Rgb c;
    if (color_by_field) {
      const double t = std::isfinite(r.field) && fmax > 0 ? r.field / fmax : 0.0;
      c = detail::hue(0.66 * (1.0 - t));
    } else {
      c = detail::hue(r.theta / (2.0 * std::numbers::pi));
    }
    const std::size_t at = (std::size_t(py) * std::size_t(width) + std::size_t(px)) * 3;
    pix[at] = c.r;
    pix[at + 1] = c.g;
    pix[at + 2] = c.b;
  }
  os << "P6 " << width << ' ' << height << " 255\n";
  os.write(reinterpret_cast<const char*>(pix.data()), std::streamsize(pix.size()));
}

/// Evaluates the mesh and writes the job's output to `os`.
inline RenderSummary render_image(const RenderJob& job, std::ostream& os,
                                  int workers = default_worker_count()) {
  std::size_t skipped = 0;
  const auto rows = render_points(job, &skipped, workers);
  const RenderSummary s = summarize(rows, skipped);
  if (job.format == RenderFormat::Csv) write_csv(os, rows, job.color_by_field);
  else write_ppm(os, rows, s, job.width, job.height, job.color_by_field);
  if (!os) raise(ErrorKind::IoFailure, "failed writing render output");
  return s;
}

/// Writes to job.path.
inline RenderSummary render_image(const RenderJob& job, int workers = default_worker_count()) {
  job.validate();
  std::ofstream os(job.path, std::ios::binary);
  if (!os) raise(ErrorKind::IoFailure, "cannot open '" + job.path + "' for writing");
  return render_image(job, os, workers);
}

}  // namespace logharm

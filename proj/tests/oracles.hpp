#pragma once

// Independent reference computations for the test suites: finite
// differences on raw function values and brute-force dense sweeps.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "logharm/error.hpp"
#include "logharm/maps.hpp"

namespace oracle {

using logharm::Complex;
using CField = std::function<Complex(Complex)>;

/// Fourth-order central difference of F along direction dir (|dir| = 1).
inline Complex directional(const CField& F, Complex z, Complex dir, double h) {
  return (-F(z + 2.0 * h * dir) + 8.0 * F(z + h * dir) - 8.0 * F(z - h * dir) + F(z - 2.0 * h * dir)) /
         (12.0 * h);
}

struct Wirt {
  Complex dz, dzbar;
};

/// (d/dz, d/dzbar) of an arbitrary smooth F by finite differences in x and y.
inline Wirt wirtinger(const CField& F, Complex z, double h = 1e-4) {
  const Complex fx = directional(F, z, {1.0, 0.0}, h);
  const Complex fy = directional(F, z, {0.0, 1.0}, h);
  const Complex I{0.0, 1.0};
  return {0.5 * (fx - I * fy), 0.5 * (fx + I * fy)};
}

/// J from finite-difference Wirtinger derivatives of f's values.
inline double jacobian_fd(const logharm::LogHarmonicMap& f, Complex z, double h = 1e-4) {
  const Wirt w = wirtinger([&f](Complex p) { return f.value(p); }, z, h);
  return std::norm(w.dz) - std::norm(w.dzbar);
}

/// (log J)_z with J from the library's closed-form Jacobian.
inline Complex dz_log_jacobian(const logharm::LogHarmonicMap& f, Complex z, double h = 1e-3) {
  return wirtinger([&f](Complex p) { return Complex{std::log(logharm::jacobian(f, p))}; }, z, h).dz;
}

/// max (1-|z|^2)^k |F| over a uniform polar grid; samples that throw a
/// sample failure are ignored.
inline double brute_sup(const CField& F, int k, int nr, int na, double r_max) {
  double best = 0.0;
  for (int i = 0; i <= nr; ++i) {
    const double r = r_max * i / nr;
    for (int j = 0; j < na; ++j) {
      const Complex z = std::polar(r, 2.0 * std::numbers::pi * j / na);
      try {
        best = std::max(best, std::pow(1.0 - r * r, k) * std::abs(F(z)));
      } catch (const logharm::Error& e) {
        if (!e.is_sample_failure()) throw;
      }
    }
  }
  return best;
}

/// Uniformly distributed points in the disk of radius r_max (fixed seed per call).
inline std::vector<Complex> disk_points(std::size_t n, double r_max, std::uint64_t seed,
                                        double r_min = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> out;
  out.reserve(n);
  while (out.size() < n) {
    const double r = r_max * std::sqrt(u(rng));
    if (r < r_min) continue;
    out.push_back(std::polar(r, 2.0 * std::numbers::pi * u(rng)));
  }
  return out;
}

/// |a - b| <= tol * max(1, |b|).
inline bool close(Complex a, Complex b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace oracle

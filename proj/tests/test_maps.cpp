#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "fixture_maps.hpp"
#include "logharm/maps.hpp"
#include "oracles.hpp"

using logharm::Complex;
using logharm::Error;
using logharm::ErrorKind;
using logharm::LogHarmonicMap;
using logharm::parse;

namespace {

template <class F>
ErrorKind kind_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::IoFailure;
}

}  // namespace

TEST(Validation, RejectsBadRepresentations) {
  auto make = [](int m, Complex beta, const char* h, const char* g) {
    return [=] { LogHarmonicMap::from_strings(m, beta, h, g); };
  };
  EXPECT_EQ(kind_of(make(-1, 0.0, "1", "1")), ErrorKind::InvalidMap);
  EXPECT_EQ(kind_of(make(1, -0.5, "1", "1")), ErrorKind::InvalidMap);
  EXPECT_EQ(kind_of(make(1, {-0.6, 1.0}, "1", "1")), ErrorKind::InvalidMap);
  EXPECT_EQ(kind_of(make(1, 0.0, "1", "2")), ErrorKind::InvalidMap);      // g(0) != 1
  EXPECT_EQ(kind_of(make(1, 0.0, "z", "1")), ErrorKind::InvalidMap);      // h(0) = 0
  EXPECT_EQ(kind_of(make(0, 0.0, "z^2+1", "1")), ErrorKind::InvalidMap);  // h'(0) = 0
  EXPECT_EQ(kind_of(make(0, 0.0, "z", "z")), ErrorKind::InvalidMap);      // g(0) = 0
  EXPECT_EQ(kind_of(make(0, 0.0, "1/z", "1")), ErrorKind::InvalidMap);    // singular at 0
  EXPECT_NO_THROW(make(0, 0.0, "z/(1-z)", "1/(1-z)")());
  EXPECT_NO_THROW(make(1, {-0.49, 3.0}, "2", "1")());
}

TEST(Ex1, DilatationJacobianAndPreSchwarzian) {
  const auto f = testmaps::ex1();
  for (Complex z : oracle::disk_points(25, 0.95, 5, 0.01)) {
    const Complex expected = (2.0 - 3.0 * z) / (3.0 - 2.0 * z);
    EXPECT_LE(std::abs(logharm::dilatation(f, z) - expected), 1e-14);
  }
  EXPECT_LE(std::abs(logharm::dilatation(f, 0.5) - 0.25), 1e-15);
  EXPECT_NEAR(logharm::pre_schwarzian(f, 0.5).real(), 28.0 / 3.0, 1e-12);
  EXPECT_NEAR(logharm::pre_schwarzian(f, 0.5).imag(), 0.0, 1e-12);
}

TEST(Ex1, JacobianClosedForm) {
  const auto f = testmaps::ex1();
  const double r = 0.5;
  const double H = r / ((1 - r) * (1 - r)) + 3 / (1 - r);  // z h' + 3 h
  const double G = std::pow(r, 4) * (1 - r);
  EXPECT_NEAR(logharm::jacobian(f, r), H * H * G * G * (1 - 0.0625), 1e-12);
  EXPECT_NEAR(oracle::jacobian_fd(f, r), logharm::jacobian(f, r), 1e-9);
}

TEST(Th0, PreSchwarzianAtOrigin) {
  const auto p = logharm::pre_schwarzian(testmaps::th0(), 0.0);
  EXPECT_EQ(p, Complex(3.0, 0.0));
}

TEST(Wirtinger, MatchesFiniteDifferencesOfValues) {
  for (const auto& [name, f] : testmaps::identity_suite()) {
    for (Complex z : oracle::disk_points(20, 0.7, 17, 0.05)) {
      const auto w = logharm::wirtinger(f, z);
      const auto fd = oracle::wirtinger([&f](Complex p) { return f.value(p); }, z);
      EXPECT_TRUE(oracle::close(w.f_z, fd.dz, 1e-8)) << name << " at " << z;
      EXPECT_TRUE(oracle::close(w.f_zbar, fd.dzbar, 1e-8)) << name << " at " << z;
      EXPECT_TRUE(oracle::close(w.f_val, f.value(z), 1e-13)) << name << " at " << z;
    }
  }
}

TEST(Wirtinger, LogHarmonicEquation) {
  // conj(f_zbar)/conj(f) = omega f_z / f
  for (const auto& [name, f] : testmaps::identity_suite()) {
    for (Complex z : oracle::disk_points(10, 0.7, 23, 0.05)) {
      const auto w = logharm::wirtinger(f, z);
      const Complex lhs = std::conj(w.f_zbar) / std::conj(w.f_val);
      const Complex rhs = logharm::dilatation(f, z) * w.f_z / w.f_val;
      EXPECT_TRUE(oracle::close(lhs, rhs, 1e-12)) << name << " at " << z;
    }
  }
}

TEST(LocalData, ConsistentWithPointwiseOps) {
  const auto f = testmaps::identity_suite()[6].f;  // complex beta
  const Complex z{0.31, -0.42};
  const auto d = logharm::local_data(f, z);
  EXPECT_EQ(d.z, z);
  EXPECT_EQ(d.omega, logharm::dilatation(f, z));
  EXPECT_NEAR(d.jacobian, logharm::jacobian(f, z), 1e-14 * d.jacobian);
  EXPECT_EQ(d.phi_logderiv, logharm::phi_family(f, z).P_phi);
  const auto fd = oracle::wirtinger([&](Complex p) { return logharm::dilatation(f, p); }, z);
  EXPECT_TRUE(oracle::close(d.omega_d1, fd.dz, 1e-9));
  const auto fd2 = oracle::wirtinger([&](Complex p) { return logharm::local_data(f, p).omega_d1; }, z);
  EXPECT_TRUE(oracle::close(d.omega_d2, fd2.dz, 1e-8));
  EXPECT_LE(std::abs(fd.dzbar), 1e-9);  // omega is analytic
}

TEST(Analytic, KoebeClassicalDerivatives) {
  const auto k = parse("z/(1-z)^2");
  const Complex z{0.3, 0.2};
  EXPECT_TRUE(oracle::close(logharm::analytic_pre_schwarzian(k, z), (4.0 + 2.0 * z) / (1.0 - z * z), 1e-13));
  EXPECT_TRUE(oracle::close(logharm::analytic_schwarzian(k, z), -6.0 / ((1.0 - z * z) * (1.0 - z * z)), 1e-13));
  EXPECT_EQ(kind_of([] { logharm::analytic_pre_schwarzian(parse("z^2"), 0.0); }), ErrorKind::CriticalPoint);
  EXPECT_EQ(kind_of([] { logharm::analytic_schwarzian(parse("(z-0.5)^2"), 0.5); }), ErrorKind::CriticalPoint);
}

TEST(Analytic, NonVanishingFormWithConstantGReducesToClassical) {
  const auto e = parse("exp(z/(1-z))");
  const auto f = LogHarmonicMap::nonvanishing(e, parse("1"));
  for (Complex z : oracle::disk_points(10, 0.9, 29)) {
    EXPECT_TRUE(oracle::close(logharm::pre_schwarzian(f, z), logharm::analytic_pre_schwarzian(e, z), 1e-13));
    EXPECT_TRUE(oracle::close(logharm::schwarzian(f, z), logharm::analytic_schwarzian(e, z), 1e-13));
  }
}

TEST(PhiFamily, MatchesAnalyticPhiForNonVanishingForm) {
  // m = 0: phi' = h' g, so P_phi = h''/h' + g'/g.
  const auto f = testmaps::th11_second(0.6);
  const Complex z{0.2, 0.5};
  const auto phi = logharm::phi_family(f, z);
  const auto h = f.h().jet<3>(z);
  const auto g = f.g().jet<3>(z);
  EXPECT_TRUE(oracle::close(phi.P_phi, h[2] / h[1] + g[1] / g[0], 1e-13));
  // S_phi = P_phi' - P_phi^2 / 2
  const auto fd = oracle::wirtinger([&](Complex p) { return logharm::phi_family(f, p).P_phi; }, z, 1e-3);
  EXPECT_TRUE(oracle::close(phi.S_phi, fd.dz - 0.5 * phi.P_phi * phi.P_phi, 1e-9));
}

TEST(HgEpsilon, ClosedFormMatchesDirectDifferentiation) {
  const auto suite = testmaps::identity_suite();
  for (const auto& [name, f] : suite) {
    if (f.m() != 0) continue;
    for (Complex eps : {Complex(1.0), Complex(-1.0), Complex(0.0), Complex(0.0, 1.0), Complex(0.5, -0.5)}) {
      const auto e = logharm::hg_epsilon_expr(f, eps);
      for (Complex z : oracle::disk_points(10, 0.7, 31, 0.05)) {
        const Complex closed = logharm::hg_epsilon_pre_schwarzian(f, eps, z);
        const Complex direct = logharm::analytic_pre_schwarzian(e, z);
        EXPECT_TRUE(oracle::close(closed, direct, 1e-10)) << name << " eps=" << eps << " z=" << z;
      }
    }
  }
  // eps = 1 is the classical pre-Schwarzian of h g
  const auto f = testmaps::th0();
  EXPECT_TRUE(oracle::close(logharm::hg_epsilon_pre_schwarzian(f, 1.0, 0.3),
                            logharm::analytic_pre_schwarzian(parse("exp(z/(1-z))*exp(-z/(1-z))/(1-z)"), 0.3),
                            1e-13));
  EXPECT_EQ(kind_of([&] { logharm::hg_epsilon_pre_schwarzian(f, 1.5, 0.3); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { logharm::hg_epsilon_pre_schwarzian(testmaps::ex1(), 1.0, 0.3); }),
            ErrorKind::InvalidArgument);
}

TEST(Errors, PolesSensePreservingAndCriticalPoints) {
  const auto ex1 = testmaps::ex1();
  EXPECT_EQ(kind_of([&] { logharm::pre_schwarzian(ex1, 0.0); }), ErrorKind::PoleEncountered);
  EXPECT_EQ(kind_of([&] { logharm::pre_schwarzian(ex1, 1e-9); }), ErrorKind::PoleEncountered);
  EXPECT_EQ(kind_of([&] { logharm::wirtinger(ex1, 0.0); }), ErrorKind::PoleEncountered);
  EXPECT_EQ(kind_of([&] { logharm::pre_schwarzian(ex1, 1.0); }), ErrorKind::PoleEncountered);
  // omega = 1.2 z leaves the disk
  const auto wide = LogHarmonicMap::from_strings(0, 0.0, "1/(1-z)", "exp(-1.2*z)/(1-z)^1.2");
  EXPECT_EQ(kind_of([&] { logharm::pre_schwarzian(wide, 0.9); }), ErrorKind::NotSensePreserving);
  EXPECT_EQ(kind_of([&] { logharm::dbar_pre_schwarzian(wide, 0.9); }), ErrorKind::NotSensePreserving);
  EXPECT_NO_THROW(logharm::pre_schwarzian(wide, 0.5));
  // h' = 0 for m = 0 is a critical point of f
  const auto crit = LogHarmonicMap::from_strings(0, 0.0, "z-z^2", "1");
  EXPECT_EQ(kind_of([&] { logharm::pre_schwarzian(crit, 0.5); }), ErrorKind::CriticalPoint);
  // (beta+1) m + z h'/h = 1 - 2z vanishes at z = 1/2
  const auto degenerate = LogHarmonicMap::from_strings(1, 0.0, "exp(-2*z)", "1");
  EXPECT_EQ(kind_of([&] { logharm::dilatation(degenerate, 0.5); }), ErrorKind::DegenerateDenominator);
}

TEST(Jacobian, OriginBehaviour) {
  // G exponent c = (2 Re beta + 1) m - 1
  EXPECT_EQ(logharm::jacobian(testmaps::ex1(), 0.0), 0.0);  // c = 4
  EXPECT_EQ(kind_of([] { logharm::jacobian(LogHarmonicMap::from_strings(1, -0.25, "1", "1"), 0.0); }),
            ErrorKind::PoleEncountered);  // c = -1/2
  EXPECT_GT(logharm::jacobian(testmaps::lh_koebe(), 0.0), 0.0);  // c = 0
}

TEST(Composition, MatchesFiniteDifferenceOfLogJacobian) {
  const auto f = testmaps::th0();
  const auto psi = parse("(z-0.3)/(1-0.3*z)");
  for (Complex z : oracle::disk_points(10, 0.6, 37)) {
    const auto logj = [&](Complex p) {
      const Complex w = psi(p);
      const Complex dpsi = psi.jet<1>(p)[1];
      return Complex{std::log(logharm::jacobian(f, w) * std::norm(dpsi))};
    };
    const Complex fd = oracle::wirtinger(logj, z, 1e-3).dz;
    EXPECT_TRUE(oracle::close(logharm::compose_with_analytic(f, psi, z), fd, 1e-7)) << z;
  }
  EXPECT_EQ(kind_of([&] { logharm::compose_with_analytic(f, parse("z^2"), 0.0); }), ErrorKind::CriticalPoint);
  EXPECT_EQ(kind_of([&] { logharm::compose_with_analytic(f, parse("2*z"), 0.6); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { logharm::compose_with_analytic(testmaps::ex1(), psi, 0.1); }),
            ErrorKind::InvalidArgument);
}

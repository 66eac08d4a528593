#include "anw/pump.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace anw;

namespace {

double wrap(double phi) {
  double r = std::fmod(phi, 2 * kPi);
  if (r < 0) r += 2 * kPi;
  return r;
}

// Composite Simpson rule on [0, z] with `intervals` panels, elementwise.
CMatrix simpson_integral(const SupermodeBasis& b, const PumpProfile& p, double z, int intervals) {
  const double h = z / intervals;
  CMatrix acc = CMatrix::Zero(b.size(), b.size());
  for (int i = 0; i <= intervals; ++i) {
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * coupling_matrix(b, p, i * h).entries;
  }
  return acc * (h / 3.0);
}

}  // namespace

TEST_SUITE("pump") {
  TEST_CASE("flat uniform profile") {
    const double phi = -kPi / 2;
    const auto p = build_pump_profile(PumpPattern::flat_uniform, 5, 0.015, std::vector<double>{phi});
    for (int j = 0; j < 5; ++j) {
      CHECK(p.amplitudes()[j] == 0.015);
      CHECK(p.phases()[j] == phi);
    }
  }

  TEST_CASE("alternating pi profile") {
    const auto p = build_pump_profile(PumpPattern::flat_alternating_pi, 4, 0.02, std::vector<double>{0.0});
    const double ref[] = {0.0, kPi, 0.0, kPi};
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(wrap(p.phases()[j] + 1e-9) - 1e-9 - ref[j]) < 1e-12);
      CHECK(p.amplitudes()[j] == 0.02);
    }
  }

  TEST_CASE("site-selective profiles") {
    const auto c = build_pump_profile(PumpPattern::central_only, 5, 0.03, std::vector<double>{-kPi / 2});
    CHECK(c.amplitudes() == std::vector<double>{0, 0, 0.03, 0, 0});
    const auto o = build_pump_profile(PumpPattern::odd_only, 5, 0.03, {});
    CHECK(o.amplitudes() == std::vector<double>{0.03, 0, 0.03, 0, 0.03});
    const auto e = build_pump_profile(PumpPattern::even_only, 4, 0.03, {});
    CHECK(e.amplitudes() == std::vector<double>{0, 0.03, 0, 0.03});
    const auto g = build_pump_profile(PumpPattern::flat_alternating_general, 4, 0.01, std::vector<double>{0.1, 0.7});
    CHECK(g.phases() == std::vector<double>{0.1, 0.7, 0.1, 0.7});
  }

  TEST_CASE("pump errors") {
    CHECK_THROWS_AS(build_pump_profile(PumpPattern::flat_uniform, 5, -0.01, {}), std::invalid_argument);
    CHECK_THROWS_AS(build_pump_profile(PumpPattern::central_only, 4, 0.01, {}), std::invalid_argument);
    CHECK_THROWS_AS(build_pump_profile(PumpPattern::flat_alternating_general, 4, 0.01, std::vector<double>{0.1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_pump_profile(PumpPattern::custom, 4, 0.01, {}), std::invalid_argument);
    CHECK_THROWS_AS(PumpProfile(PumpPattern::custom, {0.1, 0.2}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(pump_pattern_from_string("checkerboard"), std::invalid_argument);
    CHECK(pump_pattern_from_string("odd_only") == PumpPattern::odd_only);
  }

  TEST_CASE("flat uniform pump gives a diagonal coupling matrix") {
    const auto b = supermode_basis(build_coupling_profile(ProfileKind::homogeneous, 5, 0.24));
    const double eta = 0.015, phi = -kPi / 2, z = 7.3;
    const auto l = coupling_matrix(b, build_pump_profile(PumpPattern::flat_uniform, 5, eta, std::vector<double>{phi}), z);
    CHECK(l.z == z);
    for (int k = 0; k < 5; ++k) {
      for (int kp = 0; kp < 5; ++kp) {
        if (k == kp) {
          const cplx ref = 2.0 * kI * eta * std::exp(kI * (phi - 2 * b.eigenvalue(k) * z));
          CHECK(std::abs(l.entries(k, k) - ref) < 1e-15);
        } else {
          CHECK(std::abs(l.entries(k, kp)) < 1e-14);
        }
        CHECK(l.entries(k, kp) == l.entries(kp, k));
      }
    }
  }

  TEST_CASE("alternating pi pump gives an antidiagonal coupling matrix") {
    const auto b = supermode_basis(build_coupling_profile(ProfileKind::parabolic, 6, 0.2));
    const double eta = 0.02, phi = 0.3, z = 4.0;
    const auto l =
        coupling_matrix(b, build_pump_profile(PumpPattern::flat_alternating_pi, 6, eta, std::vector<double>{phi}), z);
    for (int k = 0; k < 6; ++k) {
      for (int kp = 0; kp < 6; ++kp) {
        if (kp == b.partner(k)) {
          const cplx ref = 2.0 * kI * eta * std::exp(kI * (phi - (b.eigenvalue(k) + b.eigenvalue(kp)) * z));
          CHECK(std::abs(l.entries(k, kp) - ref) < 1e-14);
        } else {
          CHECK(std::abs(l.entries(k, kp)) < 1e-14);
        }
      }
    }
  }

  TEST_CASE("coupling matrix at z = 0 with real pump is imaginary") {
    const auto b = supermode_basis(build_coupling_profile(ProfileKind::square_root, 6, 0.2));
    const PumpProfile p(PumpPattern::custom, {0.01, 0.0, 0.03, 0.02, 0.0, 0.05}, std::vector<double>(6, 0.0));
    const auto l = coupling_matrix(b, p, 0.0);
    CHECK(max_abs(RMatrix(l.entries.real())) == 0.0);
    RMatrix ref = RMatrix::Zero(6, 6);
    for (int j = 0; j < 6; ++j) ref += 2.0 * p.amplitudes()[j] * b.modes().col(j) * b.modes().col(j).transpose();
    CHECK(max_abs(RMatrix(l.entries.imag() - ref)) < 1e-15);
  }

  TEST_CASE("alternating general phases weight diagonal and antidiagonal parts") {
    const auto b = supermode_basis(build_coupling_profile(ProfileKind::homogeneous, 5, 0.24));
    const double eta = 0.015, dplus = 0.4;
    for (double dminus : {0.0, 0.3, kPi / 4, kPi / 2}) {
      const auto p = build_pump_profile(PumpPattern::flat_alternating_general, 5, eta, alternating_phases(dplus, dminus));
      const CMatrix l = coupling_matrix(b, p, 0.0).entries;
      for (int k = 0; k < 5; ++k) {
        for (int kp = 0; kp < 5; ++kp) {
          cplx ref = 0.0;
          if (k == kp) ref += 2.0 * kI * eta * std::exp(kI * dplus) * std::cos(dminus);
          if (kp == b.partner(k)) ref += 2.0 * eta * std::exp(kI * dplus) * std::sin(dminus);
          CHECK(std::abs(l(k, kp) - ref) < 1e-14);
        }
      }
    }
  }

  TEST_CASE("central pump decouples supermodes with a node at the centre") {
    for (auto kind : {ProfileKind::homogeneous, ProfileKind::parabolic}) {
      const auto b = supermode_basis(build_coupling_profile(kind, 7, 0.2));
      const auto l =
          coupling_matrix(b, build_pump_profile(PumpPattern::central_only, 7, 0.02, std::vector<double>{-kPi / 2}), 3.0);
      for (int k = 1; k < 7; k += 2) {
        CHECK(max_abs(CMatrix(l.entries.row(k))) < 1e-14);
        CHECK(max_abs(CMatrix(l.entries.col(k))) < 1e-14);
      }
      CHECK(std::abs(l.entries(0, 0)) > 1e-3);
    }
  }

  TEST_CASE("integrated coupling closed forms") {
    const auto b = supermode_basis(build_coupling_profile(ProfileKind::homogeneous, 5, 0.24));
    const double eta = 0.015, phi = -kPi / 2, z = 20.0;
    const auto p = build_pump_profile(PumpPattern::flat_uniform, 5, eta, std::vector<double>{phi});
    const CMatrix li = integrated_coupling_matrix(b, p, z);
    const cplx e = std::polar(eta, phi);
    CHECK(std::abs(li(2, 2) - 2.0 * kI * e * z) < 1e-15);
    for (int k : {0, 1, 3, 4}) {
      const double lam = b.eigenvalue(k);
      const cplx ref = (e / lam) * (1.0 - std::exp(-2.0 * kI * lam * z));
      CHECK(std::abs(li(k, k) - ref) < 1e-14);
    }
    CHECK(max_abs(integrated_coupling_matrix(b, p, 0.0)) == 0.0);
  }

  TEST_CASE("integrated coupling matches quadrature for random pumps") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> amp(0.0, 0.05), ph(-kPi, kPi), zz(0.5, 30.0);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + trial % 8;
      std::vector<double> a(n), f(n);
      for (int j = 0; j < n; ++j) {
        a[j] = amp(rng);
        f[j] = ph(rng);
      }
      const auto kind = trial % 3 == 0 ? ProfileKind::homogeneous
                                       : (trial % 3 == 1 ? ProfileKind::parabolic : ProfileKind::square_root);
      const auto b = supermode_basis(build_coupling_profile(kind, n, 0.24));
      const PumpProfile p(PumpPattern::custom, a, f);
      const double z = zz(rng);
      const CMatrix li = integrated_coupling_matrix(b, p, z);
      CHECK(max_abs(CMatrix(li - simpson_integral(b, p, z, 10000))) < 1e-9);
      CHECK(max_abs(CMatrix(li - li.transpose())) == 0.0);
    }
  }

  TEST_CASE("near-resonant series is continuous") {
    // Tiny lattice coupling pushes |lambda_k + lambda_k'| z across the series threshold.
    const auto p = build_pump_profile(PumpPattern::flat_uniform, 3, 0.02, std::vector<double>{0.2});
    for (double c0 : {1e-9, 5e-8, 1e-7, 1e-6}) {
      const auto b = supermode_basis(build_coupling_profile(ProfileKind::homogeneous, 3, c0));
      const double z = 10.0;
      const CMatrix li = integrated_coupling_matrix(b, p, z);
      for (int k = 0; k < 3; ++k) {
        const double s = 2 * b.eigenvalue(k);
        const cplx exact = 2.0 * kI * std::polar(0.02, 0.2) * z * std::exp(-0.5 * kI * s * z) *
                           (s == 0.0 ? 1.0 : std::sin(0.5 * s * z) / (0.5 * s * z));
        CHECK(std::abs(li(k, k) - exact) < 1e-15);
      }
    }
  }

  TEST_CASE("dimension mismatch") {
    const auto b = supermode_basis(build_coupling_profile(ProfileKind::homogeneous, 5, 0.24));
    const auto p = build_pump_profile(PumpPattern::flat_uniform, 4, 0.01, {});
    CHECK_THROWS_AS(coupling_matrix(b, p, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrated_coupling_matrix(b, p, 1.0), std::invalid_argument);
  }
}

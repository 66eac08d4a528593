#include "anw/decomp.hpp"
#include "anw/qpm.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace anw;

namespace {

const double kC0 = 0.24;
const double kEta = 0.015;

}  // namespace

TEST_SUITE("qpm") {
  TEST_CASE("grating periods") {
    const auto hom = supermode_basis(build_coupling_profile(ProfileKind::homogeneous, 5, kC0));
    const auto g = qpm_grating_for(hom, 0);
    CHECK(g.period == doctest::Approx(kPi / (std::sqrt(3.0) * kC0)).epsilon(1e-12));
    CHECK(g.period == doctest::Approx(7.557).epsilon(1e-3));
    CHECK(g.duty_cycle == 0.5);
    CHECK(qpm_grating_for(hom, 4).period == doctest::Approx(g.period).epsilon(1e-12));
    CHECK_THROWS_AS(qpm_grating_for(hom, 2), std::invalid_argument);
    CHECK_THROWS_AS(qpm_grating_for(hom, 5), std::invalid_argument);
    const auto par = supermode_basis(build_coupling_profile(ProfileKind::parabolic, 5, kC0));
    CHECK(qpm_grating_for(par, 1).period == doctest::Approx(kPi / kC0).epsilon(1e-12));
    CHECK_THROWS_AS(QpmGrating(0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(QpmGrating(0, -1.0), std::invalid_argument);
  }

  TEST_CASE("unmodulated limit equals the plain propagator") {
    const auto prof = build_coupling_profile(ProfileKind::homogeneous, 5, kC0);
    const auto pump = build_pump_profile(PumpPattern::flat_uniform, 5, kEta, std::vector<double>{-kPi / 2});
    const QpmGrating huge(0, 1e6);
    for (double z : {0.0, 7.0, 20.0}) {
      const RMatrix a = qpm_propagator(prof, pump, huge, z).matrix();
      const RMatrix b = propagator(drift_generator(prof, pump), z).matrix();
      CHECK(testutil::rel_err(a, b) < 1e-12);
    }
  }

  TEST_CASE("sign flips do nothing without nonlinearity") {
    const auto prof = build_coupling_profile(ProfileKind::homogeneous, 5, kC0);
    const auto pump = build_pump_profile(PumpPattern::flat_uniform, 5, 0.0, {});
    const auto g = qpm_grating_for(supermode_basis(prof), 0);
    for (double z : {g.period, 3.4 * g.period}) {
      const RMatrix a = qpm_propagator(prof, pump, g, z).matrix();
      const RMatrix b = propagator(drift_generator(prof, pump), z).matrix();
      CHECK(testutil::rel_err(a, b) < 1e-12);
    }
  }

  TEST_CASE("piecewise product matches an explicit segment walk") {
    const auto prof = build_coupling_profile(ProfileKind::square_root, 4, 0.2);
    const PumpProfile pump(PumpPattern::custom, {0.01, 0.02, 0.015, 0.03}, {0.1, -0.4, 1.3, 0.0});
    const QpmGrating g(0, 3.0, 0.3);
    const RMatrix up = drift_generator(prof, pump).matrix();
    const RMatrix down = drift_generator(prof, pump.phase_shifted(kPi)).matrix();
    for (double z : {0.5, 0.9, 2.0, 3.0, 7.4, 8.2, 31.0}) {
      RMatrix ref = RMatrix::Identity(8, 8);
      double pos = 0.0;
      bool flipped = false;
      while (pos < z) {
        const double len = flipped ? 2.1 : 0.9;
        const double step = std::min(len, z - pos);
        ref = testutil::oracle_expm(RMatrix((flipped ? down : up) * step)) * ref;
        pos += step;
        flipped = !flipped;
      }
      const auto s = qpm_propagator(prof, pump, g, z);
      CHECK(testutil::rel_err(s.matrix(), ref) < 1e-11);
      CHECK(symplectic_residual(s.matrix()) < 1e-9);
      CHECK(covariance_from(s).matrix().determinant() == doctest::Approx(1.0).epsilon(1e-6));
    }
  }

  TEST_CASE("first-order estimate") {
    const auto basis = supermode_basis(build_coupling_profile(ProfileKind::homogeneous, 5, kC0));
    const auto pump = build_pump_profile(PumpPattern::flat_uniform, 5, kEta, std::vector<double>{-kPi / 2});
    const auto g = qpm_grating_for(basis, 0);
    const RVector r = qpm_approx_gain(basis, pump, g, 20.0);
    CHECK(r(0) == doctest::Approx(0.3820).epsilon(1e-4));
    CHECK(r(4) == doctest::Approx(r(0)).epsilon(1e-15));
    CHECK(r(0) / (2 * kEta * 20.0) == doctest::Approx(2 / kPi).epsilon(1e-14));
    for (int k : {1, 2, 3}) CHECK(r(k) < r(0));
    CHECK(max_abs(qpm_approx_gain(basis, pump, g, 0.0)) == 0.0);

    CHECK_THROWS_AS(qpm_approx_gain(basis, pump, QpmGrating(0, g.period, 0.4), 20.0), std::invalid_argument);
    const auto odd = build_pump_profile(PumpPattern::odd_only, 5, kEta, {});
    CHECK_THROWS_AS(qpm_approx_gain(basis, odd, g, 20.0), std::invalid_argument);
  }

  TEST_CASE("exact matched gain follows the first-order rate") {
    const auto prof = build_coupling_profile(ProfileKind::homogeneous, 5, kC0);
    const auto basis = supermode_basis(prof);
    const auto pump = build_pump_profile(PumpPattern::flat_uniform, 5, kEta, std::vector<double>{-kPi / 2});
    const auto g = qpm_grating_for(basis, 0);
    for (int n = 2; n * g.period / 2 * kEta <= 0.5; ++n) {
      const double z = n * g.period / 2;
      const RMatrix v = covariance_from(qpm_propagator(prof, pump, g, z)).matrix();
      const RVector exact = supermode_block_gains(v, basis);
      const RVector approx = qpm_approx_gain(basis, pump, g, z);
      CAPTURE(z);
      CHECK(std::abs(exact(0) / approx(0) - 1.0) < 0.05);
      CHECK(std::abs(exact(4) / approx(4) - 1.0) < 0.05);
      CHECK(std::abs(exact(0) / (2 * kEta * z) / (2 / kPi) - 1.0) < 0.05);
    }
  }

  TEST_CASE("block gains agree with Bloch-Messiah when supermodes decouple") {
    const auto prof = build_coupling_profile(ProfileKind::homogeneous, 5, kC0);
    const auto basis = supermode_basis(prof);
    const auto pump = build_pump_profile(PumpPattern::flat_uniform, 5, kEta, std::vector<double>{0.3});
    const auto g = qpm_grating_for(basis, 1);
    const auto s = qpm_propagator(prof, pump, g, 23.0);
    RVector blocks = supermode_block_gains(covariance_from(s).matrix(), basis);
    std::sort(blocks.begin(), blocks.end(), std::greater<>());
    const auto bm = bloch_messiah(s);
    CHECK(max_abs(RMatrix(blocks - bm.k_diag)) < 1e-9);
  }

  TEST_CASE("matched modes outgrow unmatched side modes") {
    for (auto kind : {ProfileKind::homogeneous, ProfileKind::parabolic}) {
      const auto prof = build_coupling_profile(kind, 5, kC0);
      const auto basis = supermode_basis(prof);
      const auto pump = build_pump_profile(PumpPattern::flat_uniform, 5, kEta, std::vector<double>{-kPi / 2});
      for (int target : {0, 1}) {
        const auto g = qpm_grating_for(basis, target);
        const RVector r =
            supermode_block_gains(covariance_from(qpm_propagator(prof, pump, g, 10 * g.period)).matrix(), basis);
        const int other = target == 0 ? 1 : 0;
        CHECK(r(target) > r(other));
        CHECK(r(basis.partner(target)) > r(basis.partner(other)));
      }
    }
  }
}

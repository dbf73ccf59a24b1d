#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cascade/device.hpp"
#include "cascade/errors.hpp"
#include "cascade/rwa.hpp"
#include "test_util.hpp"

using namespace cascade;
using testutil::nominal_device;
using testutil::nominal_pumps;
using testutil::rel_frobenius;

TEST_CASE("effective coefficients of the reference design") {
    EffectiveCoeffs c = effective_coefficients(nominal_device(), nominal_pumps());
    CHECK(std::abs(c.g_4ph) / two_pi == doctest::Approx(40674.00152431526).epsilon(1e-12));
    CHECK(c.g_4ph.imag() == 0.0);
    CHECK(std::abs(c.eps_4ph) / two_pi == doctest::Approx(650538.2386916238).epsilon(1e-12));
    CHECK(c.chi_ea / two_pi == doctest::Approx(-624.0).epsilon(1e-9));
    CHECK(c.chi_fa / two_pi == doctest::Approx(614150.4).epsilon(1e-12));
    CHECK(c.zeta_gaa / two_pi == doctest::Approx(156.0).epsilon(1e-9));
    CHECK(c.zeta_eaa / two_pi == doctest::Approx(-153693.6).epsilon(1e-12));
    CHECK(c.zeta_faa / two_pi == doctest::Approx(153537.6).epsilon(1e-12));
    CHECK(c.chi_bb == doctest::Approx(two_pi * 200e6));
    CHECK(c.delta == doctest::Approx(-two_pi * 153537.6));
}

TEST_CASE("coefficients scale bilinearly in the pump pair") {
    DeviceParams p = nominal_device();
    PumpConfig pm = nominal_pumps(false);
    EffectiveCoeffs base = effective_coefficients(p, pm);

    PumpConfig doubled = pm;
    doubled.g1 *= 2.0;
    doubled.g2 *= 2.0;
    EffectiveCoeffs big = effective_coefficients(p, doubled);
    CHECK(std::abs(big.g_4ph) == doctest::Approx(4.0 * std::abs(base.g_4ph)));
    CHECK(big.zeta_gaa == doctest::Approx(4.0 * base.zeta_gaa));
    CHECK(big.zeta_faa == doctest::Approx(4.0 * base.zeta_faa));
    CHECK(big.chi_fa == doctest::Approx(4.0 * base.chi_fa));

    PumpConfig rotated = pm;
    rotated.g1 *= std::polar(1.0, 0.3);
    rotated.g2 *= std::polar(1.0, -1.1);
    EffectiveCoeffs rot = effective_coefficients(p, rotated);
    CHECK(std::arg(rot.g_4ph) == doctest::Approx(-0.8));
    CHECK(rot.zeta_gaa == doctest::Approx(base.zeta_gaa));  // phase-insensitive
}

TEST_CASE("single-pump limits") {
    DeviceParams p = nominal_device();
    PumpConfig only2;
    only2.g1 = 0.0;
    only2.g2 = two_pi * 2e6;
    only2.g3 = 0.0;
    EffectiveCoeffs c = effective_coefficients(p, only2);
    const double S = p.chi_bb + p.Delta;
    CHECK(std::abs(c.g_4ph) == 0.0);
    CHECK(c.zeta_gaa == doctest::Approx(-std::norm(only2.g2) / S));
    CHECK(c.chi_fa == doctest::Approx(8.0 * std::norm(only2.g2) / p.Delta));
    CHECK(c.eps_4ph == cd(0.0));
}

TEST_CASE("effective hamiltonian drives the four-photon exchange") {
    EffectiveCoeffs c = effective_coefficients(nominal_device(), nominal_pumps());
    HilbertSpace s(10, 3);
    Matrix h = build_H_eff(c, s).m;

    cd exchange = h(s.index(0, 4), s.index(2, 0));
    CHECK(std::abs(exchange - c.g_4ph * std::sqrt(24.0)) < 1e-12 * std::abs(exchange));
    cd drive = h(s.index(0, 0), s.index(2, 0));
    CHECK(std::abs(drive + c.eps_4ph) < 1e-12 * std::abs(c.eps_4ph));

    // the solved design restores the |g,4> / |f,0> degeneracy
    cd eg4 = h(s.index(0, 4), s.index(0, 4));
    cd ef0 = h(s.index(2, 0), s.index(2, 0));
    CHECK(std::abs(eg4 - ef0) < 1e-9 * std::abs(c.chi_fa));

    OperatorMatrix om = build_H_eff(c, s);
    CHECK(om.is_hermitian());
    CHECK_THROWS_AS(build_H_eff(c, HilbertSpace(10, 2)), InvalidDimension);
}

TEST_CASE("second-order correction of a detuned drive splits the levels") {
    HilbertSpace s(2, 1);
    const double nu = two_pi * 30e6;
    const cd g = two_pi * 1.5e6 * std::polar(1.0, 0.4);
    Matrix hk = Matrix::Zero(2, 2);
    hk(1, 0) = g;
    FourierHamiltonian fh{s, Matrix::Zero(2, 2), {{nu, hk}}};
    RwaResult r = second_order_rwa(fh, nullptr);
    CHECK(r.h_eff.m(0, 0).real() == doctest::Approx(std::norm(g) / nu));
    CHECK(r.h_eff.m(1, 1).real() == doctest::Approx(-std::norm(g) / nu));
    CHECK(std::abs(r.h_eff.m(1, 0)) == 0.0);
    CHECK(r.perturbative_ok);
}

TEST_CASE("normal mode commuting with its adjoint leaves the static part") {
    std::mt19937 rng(5);
    HilbertSpace s(4, 1);
    Matrix stat = testutil::random_hermitian(4, rng);
    Matrix hk = Matrix::Zero(4, 4);
    hk(0, 1) = hk(1, 0) = 0.7;  // Hermitian piece: [H^dag, H] = 0
    FourierHamiltonian fh{s, stat, {{two_pi * 10e6, hk}}};
    RwaResult r = second_order_rwa(fh, nullptr);
    CHECK(rel_frobenius(r.h_eff.m, stat) < 1e-15);

    FourierHamiltonian empty{s, stat, {}};
    CHECK(rel_frobenius(second_order_rwa(empty, nullptr).h_eff.m, stat) == 0.0);
}

TEST_CASE("generic reduction agrees with the closed-form coefficients") {
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int cdim = 10;
    const HilbertSpace s(cdim, 3);

    for (int trial = 0; trial < 20; ++trial) {
        CAPTURE(trial);
        DeviceParams p;
        p.Delta = two_pi * (20e6 + 60e6 * u(rng));
        p.chi_bb = p.Delta * (3.2 + 2.8 * u(rng));
        p.chi_aa = two_pi * (100.0 + 400.0 * u(rng));
        p.chi_ab = 2.0 * std::sqrt(p.chi_aa * p.chi_bb);
        p.delta = two_pi * (-200e3 + 400e3 * u(rng));

        PumpConfig pm;
        pm.g1 = p.Delta * 0.1 * u(rng) * std::polar(1.0, two_pi * u(rng));
        pm.g2 = p.Delta * 0.1 * u(rng) * std::polar(1.0, two_pi * u(rng));
        const bool with_g3 = trial % 2 == 1;
        pm.g3 = with_g3 ? p.chi_bb * 0.05 * u(rng) * std::polar(1.0, two_pi * u(rng)) : cd(0.0);

        FourierHamiltonian fh = build_hsys_fourier(p, pm, s);
        Matrix reduced = second_order_rwa(fh, nullptr).h_eff.m;
        EffectiveCoeffs co = effective_coefficients(p, pm);
        Matrix closed = build_H_eff(co, s).m;

        // with three junction levels the generic reduction cannot see the
        // g3-induced e-level shift; it enters only through the fourth level
        if (with_g3) {
            Matrix s_ee = embed(junction_transition(1, 1, 3), s).m;
            closed -= (3.0 * std::norm(pm.g3) / p.chi_bb) * s_ee;
        }
        CHECK(rel_frobenius(reduced, closed) < 1e-9);
    }
}

TEST_CASE("fourth junction level supplies the e-level light shift") {
    DeviceParams p = nominal_device();
    HilbertSpace s4(6, 4);
    PumpConfig with = nominal_pumps(true);
    PumpConfig without = nominal_pumps(false);

    Matrix h_with = second_order_rwa(build_hsys_fourier(p, with, s4), nullptr).h_eff.m;
    Matrix h_without = second_order_rwa(build_hsys_fourier(p, without, s4), nullptr).h_eff.m;
    const double shift = (h_with(s4.index(1, 0), s4.index(1, 0)) -
                          h_without(s4.index(1, 0), s4.index(1, 0)))
                             .real();
    // the junction two-photon drive sits 2 chi_bb above the e <-> h
    // transition, so the lower level of the pair is pushed up
    const double expected = 3.0 * std::norm(with.g3) / p.chi_bb;
    CHECK(shift == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("mode ratio warning marks the perturbative boundary") {
    DeviceParams p = nominal_device();
    HilbertSpace small(4, 3);

    PumpConfig weak = nominal_pumps(false);
    weak.g1 = two_pi * 50e3;
    weak.g2 = two_pi * 50e3;
    std::vector<std::string> warnings;
    RwaResult ok = second_order_rwa(build_hsys_fourier(p, weak, small), &warnings);
    CHECK(ok.perturbative_ok);
    CHECK(warnings.empty());

    PumpConfig strong = weak;
    strong.g1 = two_pi * 30e6;
    RwaResult flagged = second_order_rwa(build_hsys_fourier(p, strong, small), &warnings);
    CHECK(!flagged.perturbative_ok);
    CHECK(flagged.max_mode_ratio > 0.3);
    CHECK(warnings.size() == 1);
}

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

namespace {

// Interaction-picture Hamiltonian assembled directly from its displayed form,
// with explicit index bookkeeping: junction level j is the slow index.
Matrix ladder_hamiltonian(const DeviceParams& p, const PumpConfig& pm, int cdim, int jdim,
                          double t) {
    const int dim = cdim * jdim;
    auto idx = [&](int j, int n) { return j * cdim + n; };
    Matrix h = Matrix::Zero(dim, dim);

    for (int j = 0; j < jdim; ++j)
        for (int n = 0; n < cdim; ++n) {
            double nc = n, nj = j;
            h(idx(j, n), idx(j, n)) +=
                p.delta * nj - 0.5 * p.chi_aa * (nc * nc - nc) - p.chi_ab * nj * nc;
        }

    auto raman = [&](cd g, double base_phase_rate, double per_level_rate) {
        // g e^{i(per_level*j + base)t} a^dag^2 |j><j+1| + h.c., j the lower level
        for (int j = 0; j + 1 < jdim; ++j) {
            cd phase = std::exp(cd(0.0, (per_level_rate * j + base_phase_rate) * t));
            cd amp = g * std::sqrt(j + 1.0) * phase;
            for (int n = 0; n + 2 < cdim; ++n) {
                double el = std::sqrt((n + 1.0) * (n + 2.0));
                h(idx(j, n + 2), idx(j + 1, n)) += amp * el;
                h(idx(j + 1, n), idx(j, n + 2)) += std::conj(amp * el);
            }
        }
    };
    raman(pm.g1, p.Delta, p.chi_bb);
    raman(pm.g2, -p.chi_bb - p.Delta, p.chi_bb);

    for (int j = 0; j + 2 < jdim; ++j) {
        cd phase = std::exp(cd(0.0, 2.0 * p.chi_bb * j * t));
        cd amp = -pm.g3 * std::sqrt((j + 1.0) * (j + 2.0)) * phase;
        for (int n = 0; n < cdim; ++n) {
            h(idx(j, n), idx(j + 2, n)) += amp;
            h(idx(j + 2, n), idx(j, n)) += std::conj(amp);
        }
    }
    return h;
}

} // namespace

TEST_CASE("from_hz scales every field by 2 pi") {
    DeviceParams p = DeviceParams::from_hz(312.0, 200e6, 0.5e6, 50e6, -153537.6, 2e6, 4e6, 100.0);
    CHECK(p.chi_aa == doctest::Approx(two_pi * 312.0));
    CHECK(p.chi_bb == doctest::Approx(two_pi * 200e6));
    CHECK(p.chi_ab == doctest::Approx(two_pi * 0.5e6));
    CHECK(p.Delta == doctest::Approx(two_pi * 50e6));
    CHECK(p.delta == doctest::Approx(-two_pi * 153537.6));
    CHECK(p.Gamma_1 == doctest::Approx(two_pi * 2e6));
    CHECK(p.Gamma_fg_eng == doctest::Approx(two_pi * 4e6));
    CHECK(p.kappa_1ph == doctest::Approx(two_pi * 100.0));
}

TEST_CASE("device validation enforces the dispersive hierarchy") {
    DeviceParams ok = nominal_device();
    std::vector<std::string> warnings;
    ok.validate(&warnings);
    CHECK(warnings.empty());

    DeviceParams tight = ok;
    tight.chi_bb = 3.5 * ok.Delta;
    tight.validate(&warnings);
    CHECK(warnings.size() == 1);

    DeviceParams bad = ok;
    bad.chi_bb = 2.9 * ok.Delta;
    CHECK_THROWS_AS(bad.validate(nullptr), InvalidRegime);

    DeviceParams neg = ok;
    neg.Gamma_1 = -1.0;
    CHECK_THROWS_AS(neg.validate(nullptr), InvalidRegime);
}

TEST_CASE("pump frequency conditions") {
    DeviceParams p = nominal_device();
    const double wa = two_pi * 4.0e9, wb = two_pi * 6.2e9;
    PumpFrequencies f = pump_frequencies(wa, wb, p);

    // difference of the two Raman tones is fixed by the ladder anharmonicity
    CHECK((f.omega_p2 - f.omega_p1) / two_pi == doctest::Approx(300e6).epsilon(1e-12));

    // their mean sits exactly at the two-photon resonance condition
    double resonance = 2.0 * wa - wb + 0.5 * p.chi_bb + p.delta;
    CHECK(std::abs(0.5 * (f.omega_p1 + f.omega_p2) - resonance) < 1e-9 * std::abs(resonance));

    CHECK(f.omega_p3 == doctest::Approx(wb - 0.5 * p.chi_bb - 0.5 * p.delta));
    CHECK(f.raman_detuning_plus == doctest::Approx(p.Delta));
    CHECK(f.raman_detuning_minus == doctest::Approx(-p.Delta));

    // the detuning moves the two tones symmetrically apart
    DeviceParams p2 = p;
    p2.Delta += two_pi * 1e6;
    PumpFrequencies g = pump_frequencies(wa, wb, p2);
    CHECK(g.omega_p1 - f.omega_p1 == doctest::Approx(-two_pi * 1e6));
    CHECK(g.omega_p2 - f.omega_p2 == doctest::Approx(two_pi * 1e6));
    CHECK(g.omega_p3 == doctest::Approx(f.omega_p3));
}

TEST_CASE("pump couplings follow from the drive amplitudes") {
    DeviceParams p = nominal_device();
    const cd xi1 = -3.5951077869794115;
    PumpConfig pc = couplings_from_xi(p, xi1, cd(0.0, 1.0), std::polar(1.2, 0.7));

    CHECK(std::abs(pc.g1) / two_pi == doctest::Approx(898776.9467448528).epsilon(1e-9));
    CHECK(std::abs(pc.g2) == doctest::Approx(0.5 * p.chi_ab));
    CHECK(std::arg(pc.g3) == doctest::Approx(-1.4));
    CHECK(std::abs(pc.g3) == doctest::Approx(0.5 * p.chi_bb * 1.44));

    CHECK_NOTHROW(pc.validate(p));
    PumpConfig tampered = pc;
    tampered.g1 *= 1.001;
    CHECK_THROWS_AS(tampered.validate(p), InvalidRegime);
    PumpConfig partial = pc;
    partial.xi2.reset();
    CHECK_THROWS_AS(partial.validate(p), InvalidRegime);

    PumpConfig zero = couplings_from_xi(p, 0.0, 0.0, 0.0);
    CHECK(std::abs(zero.g1) == 0.0);
    CHECK(std::abs(zero.g3) == 0.0);
}

TEST_CASE("stark shifts are linear in the total pump power") {
    DeviceParams p = nominal_device();
    const double wa = two_pi * 4.0e9, wb = two_pi * 6.2e9;

    StarkShifted off = stark_shifted_frequencies(wa, wb, p, 0.0);
    CHECK(off.omega_a_tilde == doctest::Approx(wa - p.chi_aa - 0.5 * p.chi_ab));
    CHECK(off.omega_b_tilde == doctest::Approx(wb - p.chi_bb - 0.5 * p.chi_ab));

    StarkShifted one = stark_shifted_frequencies(wa, wb, p, 1.0);
    CHECK(off.omega_a_tilde - one.omega_a_tilde == doctest::Approx(p.chi_ab));
    CHECK(off.omega_b_tilde - one.omega_b_tilde == doctest::Approx(2.0 * p.chi_bb));

    StarkShifted two = stark_shifted_frequencies(wa, wb, p, 2.0);
    CHECK(one.omega_b_tilde - two.omega_b_tilde ==
          doctest::Approx(off.omega_b_tilde - one.omega_b_tilde));
}

TEST_CASE("cross-Kerr magnitude is consistent with the self-Kerr pair") {
    DeviceParams p = nominal_device();
    std::vector<std::string> warnings;
    KerrConsistency k = kerr_consistency(p, &warnings);
    CHECK(k.chi_ab_expected / two_pi == doctest::Approx(499599.83987187187).epsilon(1e-12));
    CHECK(k.within_tolerance);
    CHECK(warnings.empty());

    DeviceParams wrong = p;
    wrong.chi_ab = two_pi * 1.0e6;
    KerrConsistency bad = kerr_consistency(wrong, &warnings);
    CHECK(!bad.within_tolerance);
    CHECK(warnings.size() == 1);

    DeviceParams quad = p;
    quad.chi_aa *= 4.0;
    CHECK(kerr_consistency(quad, nullptr).chi_ab_expected ==
          doctest::Approx(2.0 * k.chi_ab_expected));
}

TEST_CASE("constraint solver reproduces the reference design") {
    DeviceParams p = nominal_device();
    ConstraintSolution s = solve_constraints(p, two_pi * 2e6);
    CHECK(s.g1 / two_pi == doctest::Approx(898776.9467448528).epsilon(1e-12));
    CHECK(s.delta / two_pi == doctest::Approx(-153537.6).epsilon(1e-12));
    CHECK(s.chi_fa / two_pi == doctest::Approx(614150.4).epsilon(1e-12));

    // residuals of the two closed-loop conditions through the coefficient map
    DeviceParams solved = p;
    solved.delta = s.delta;
    PumpConfig pm;
    pm.g1 = s.g1;
    pm.g2 = two_pi * 2e6;
    pm.g3 = 0.0;
    EffectiveCoeffs co = effective_coefficients(solved, pm);
    CHECK(std::abs(co.zeta_gaa - 0.5 * p.chi_aa) < 1e-12 * std::abs(co.zeta_gaa));
    CHECK(std::abs(s.delta + 0.25 * co.chi_fa) < 1e-12 * std::abs(co.chi_fa));

    DeviceParams trivial = p;
    trivial.chi_aa = 0.0;
    CHECK(solve_constraints(trivial, 0.0).g1 == 0.0);
    CHECK(solve_constraints(trivial, 0.0).delta == 0.0);

    DeviceParams bad = p;
    bad.Delta = 0.0;
    CHECK_THROWS_AS(solve_constraints(bad, 1.0), InvalidRegime);
    bad = p;
    bad.chi_bb = 0.5 * p.Delta;
    CHECK_THROWS_AS(solve_constraints(bad, 1.0), InvalidRegime);
}

TEST_CASE("pump branches land at the expected frame frequencies") {
    DeviceParams p = nominal_device();
    PumpConfig pm = nominal_pumps();

    FourierHamiltonian fh3 = build_hsys_fourier(p, pm, HilbertSpace(8, 3));
    REQUIRE(fh3.modes.size() == 2);
    CHECK(fh3.modes[0].nu == doctest::Approx(p.Delta));
    CHECK(fh3.modes[1].nu == doctest::Approx(p.chi_bb + p.Delta));

    FourierHamiltonian fh4 = build_hsys_fourier(p, pm, HilbertSpace(8, 4));
    REQUIRE(fh4.modes.size() == 5);
    CHECK(fh4.modes[0].nu == doctest::Approx(p.Delta));
    CHECK(fh4.modes[1].nu == doctest::Approx(p.chi_bb - p.Delta));
    CHECK(fh4.modes[2].nu == doctest::Approx(p.chi_bb + p.Delta));
    CHECK(fh4.modes[3].nu == doctest::Approx(2.0 * p.chi_bb));
    CHECK(fh4.modes[4].nu == doctest::Approx(2.0 * p.chi_bb + p.Delta));

    CHECK(fh3.nu_max() == doctest::Approx(p.chi_bb + p.Delta));
}

TEST_CASE("resonant matrix element adds the two Raman paths coherently") {
    DeviceParams p = nominal_device();
    PumpConfig pm;
    pm.g1 = cd(two_pi * 0.9e6, two_pi * 0.2e6);
    pm.g2 = cd(two_pi * 1.7e6, -two_pi * 0.4e6);
    pm.g3 = 0.0;
    HilbertSpace s(8, 3);
    Matrix h0 = build_hsys_fourier(p, pm, s).evaluate(0.0);
    cd el = h0(s.index(0, 4), s.index(1, 2));
    cd expected = (pm.g1 + pm.g2) * std::sqrt(12.0);
    CHECK(std::abs(el - expected) < 1e-12 * std::abs(expected));
    CHECK(std::abs(h0(s.index(1, 2), s.index(0, 4)) - std::conj(expected)) <
          1e-12 * std::abs(expected));
}

TEST_CASE("fourier decomposition reproduces the ladder hamiltonian in time") {
    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> ut(0.0, 2e-6);

    DeviceParams p = nominal_device();
    p.delta = -two_pi * 150e3;
    for (int jdim : {3, 4}) {
        CAPTURE(jdim);
        PumpConfig pm;
        pm.g1 = two_pi * 1e6 * testutil::random_unit(rng);
        pm.g2 = two_pi * 2e6 * testutil::random_unit(rng);
        pm.g3 = two_pi * 0.5e6 * testutil::random_unit(rng);
        const int cdim = 6;
        FourierHamiltonian fh = build_hsys_fourier(p, pm, HilbertSpace(cdim, jdim));
        for (int k = 0; k < 100; ++k) {
            const double t = ut(rng);
            Matrix lhs = fh.evaluate(t);
            Matrix rhs = ladder_hamiltonian(p, pm, cdim, jdim, t);
            CHECK(rel_frobenius(lhs, rhs) < 1e-10);
        }
        // sampled Hermiticity
        Matrix h = fh.evaluate(ut(rng));
        CHECK((h - Matrix(h.adjoint())).norm() < 1e-12 * h.norm());
    }
}

TEST_CASE("degenerate branch layouts are rejected") {
    PumpConfig pm = nominal_pumps();

    // chi_bb = 2 Delta: the second Raman ladder branch collides with the first
    DeviceParams cross = DeviceParams::from_hz(312.0, 100e6, 0.5e6, 50e6, 0.0, 0.0);
    CHECK_THROWS_AS(build_hsys_fourier(cross, pm, HilbertSpace(6, 4)), DegenerateDetuning);

    // chi_bb = Delta: a branch frequency vanishes
    DeviceParams zero = DeviceParams::from_hz(312.0, 50e6, 0.5e6, 50e6, 0.0, 0.0);
    CHECK_THROWS_AS(build_hsys_fourier(zero, pm, HilbertSpace(6, 4)), DegenerateDetuning);

    DeviceParams ok = nominal_device();
    CHECK_THROWS_AS(build_hsys_fourier(ok, pm, HilbertSpace(6, 5)), InvalidDimension);
    CHECK_THROWS_AS(build_hsys_fourier(ok, pm, HilbertSpace(2, 3)), InvalidDimension);
}

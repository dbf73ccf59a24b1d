#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cascade/op.hpp"

namespace cascade {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Hardware constants, all angular (rad/s).  Config files and reports use Hz;
// from_hz converts at the boundary.  Delta is the Raman detuning of the pump
// pair, delta the small static offset entering the junction frame.
struct DeviceParams {
    double chi_aa = 0.0;
    double chi_bb = 0.0;
    double chi_ab = 0.0;
    double Delta = 0.0;
    double delta = 0.0;
    double Gamma_1 = 0.0;
    double Gamma_fg_eng = 0.0;
    double kappa_1ph = 0.0;

    static DeviceParams from_hz(double chi_aa_hz, double chi_bb_hz, double chi_ab_hz,
                                double Delta_hz, double delta_hz, double Gamma_1_hz,
                                double Gamma_fg_eng_hz = 0.0, double kappa_1ph_hz = 0.0);

    // Throws InvalidRegime outside chi_bb >= 3*Delta or for negative rates;
    // appends a soft warning when chi_bb < 4*Delta.
    void validate(std::vector<std::string>* warnings = nullptr) const;
};

// Pump amplitudes g1, g2 (two-photon exchange legs) and g3 (junction
// two-photon drive), rad/s.  The dimensionless displaced-pump amplitudes xi
// are optional; when present they must reproduce the g's through
// couplings_from_xi to 1e-9 relative.
struct PumpConfig {
    cd g1{0.0, 0.0};
    cd g2{0.0, 0.0};
    cd g3{0.0, 0.0};
    std::optional<cd> xi1, xi2, xi3;

    void validate(const DeviceParams& params) const;
};

// g1 = -(chi_ab/2) xi1,  g2 = -(chi_ab/2) xi2,  g3 = (chi_bb/2) conj(xi3)^2.
PumpConfig couplings_from_xi(const DeviceParams& params, cd xi1, cd xi2, cd xi3);

struct PumpFrequencies {
    double omega_p1;
    double omega_p2;
    double omega_p3;
    double raman_detuning_plus;   // virtual-state offset of the g1 leg
    double raman_detuning_minus;  // virtual-state offset of the g2 leg
};

// omega_p1 = 2 wa - wb - Delta + delta
// omega_p2 = 2 wa - (wb - chi_bb) + Delta + delta
// omega_p3 = wb - chi_bb/2 - delta/2
// (wa, wb are the Stark-shifted mode frequencies; omega_p2 - omega_p1 is
// chi_bb + 2*Delta exactly, independent of delta.)
PumpFrequencies pump_frequencies(double omega_a_tilde, double omega_b_tilde,
                                 const DeviceParams& params);

struct StarkShifted {
    double omega_a_tilde;
    double omega_b_tilde;
};

// Pump-power-dependent dressed frequencies given bare mode frequencies and
// the total displaced-pump weight sum |xi_k|^2.
StarkShifted stark_shifted_frequencies(double omega_a, double omega_b,
                                       const DeviceParams& params, double xi_sq_sum);

struct KerrConsistency {
    double chi_ab_expected;  // 2 sqrt(chi_aa chi_bb)
    double rel_deviation;
    bool within_tolerance;   // 5%
};

KerrConsistency kerr_consistency(const DeviceParams& params,
                                 std::vector<std::string>* warnings = nullptr);

struct ConstraintSolution {
    double g1;       // real positive amplitude satisfying the Kerr-cancellation condition
    double delta;    // -chi_fa/4 evaluated at the solved g1 (signed)
    double chi_fa;
};

// Solves |g1|^2 = Delta (chi_aa/2 + |g2|^2/(chi_bb + Delta)) and the matching
// junction offset delta = -chi_fa/4.  Requires Delta > 0 and chi_bb > Delta.
ConstraintSolution solve_constraints(const DeviceParams& params, double g2_abs);

// H(t) = static + sum_k (H_k e^{-i nu_k t} + H_k^dag e^{+i nu_k t}),
// nu_k > 0, all distinct.  The static part is Hermitian.
struct FourierMode {
    double nu;
    Matrix op;
};

struct FourierHamiltonian {
    HilbertSpace space;
    Matrix static_part;
    std::vector<FourierMode> modes;

    Matrix evaluate(double t) const;
    double nu_max() const;
    void validate() const;  // Hermitian static, positive distinct frequencies
};

// Interaction-frame system Hamiltonian on junction (3 or 4 levels) x cavity:
// static Kerr/detuning terms plus the pump branches, one Fourier mode per
// junction block per pump, merged when branches coincide by construction.
// Branch frequencies (junction block n -> n+1, or n -> n+2 for g3):
//   g1: n chi_bb + Delta          (lowering-side operator a^2)
//   g2: |(n-1) chi_bb - Delta|
//   g3: 2 n chi_bb               (n = 0 folds into the static part)
// Accidental collisions between distinct branches raise DegenerateDetuning.
FourierHamiltonian build_hsys_fourier(const DeviceParams& params, const PumpConfig& pumps,
                                      const HilbertSpace& space);

} // namespace cascade

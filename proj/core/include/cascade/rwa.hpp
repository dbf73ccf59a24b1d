#pragma once

#include "cascade/device.hpp"

namespace cascade {

// Second-order effective coefficients of the cascaded two-photon exchange,
// all angular (rad/s).  chi_aa, chi_ab, chi_bb and delta are carried through
// so the effective Hamiltonian can be assembled from this struct alone.
//
//   g_4ph   = sqrt(2) g1 g2 (1/Delta - 1/(chi_bb + Delta))
//   eps_4ph = sqrt(2) g3
//   chi_ea  = 4|g2|^2/(chi_bb + Delta) - 4|g1|^2/Delta
//   chi_fa  = 8|g2|^2/Delta - 8|g1|^2/(chi_bb + Delta)
//   zeta_gaa = |g1|^2/Delta - |g2|^2/(chi_bb + Delta)
//   zeta_eaa = -(|g1|^2 (chi_bb - Delta) + |g2|^2 (2 chi_bb + Delta)) / (Delta (chi_bb + Delta))
//   zeta_faa = 2|g2|^2/Delta - 2|g1|^2/(chi_bb + Delta)
//
// These are the forms the generic frequency-diagonal average reproduces on a
// three-level junction; see the equivalence tests.  Under the exchange
// g1 <-> g2, Delta -> -Delta, chi_bb -> -chi_bb the g and f rows map into
// each other (chi_fa -> 2 chi_ea, zeta_faa -> -2 zeta_gaa), which pins the
// denominator signs.
struct EffectiveCoeffs {
    cd g_4ph{0.0, 0.0};
    cd eps_4ph{0.0, 0.0};
    double chi_ea = 0.0;
    double chi_fa = 0.0;
    double zeta_gaa = 0.0;
    double zeta_eaa = 0.0;
    double zeta_faa = 0.0;
    double chi_aa = 0.0;
    double chi_ab = 0.0;
    double chi_bb = 0.0;
    double delta = 0.0;
};

EffectiveCoeffs effective_coefficients(const DeviceParams& params, const PumpConfig& pumps);

// Static effective Hamiltonian on junction {g,e,f} x cavity.  Away from the
// cavity cutoff the rows reduce to
//   (g_4ph a^dag4 - eps_4ph) sigma_fg + h.c.
// + (zeta_gaa s_gg + zeta_eaa s_ee + zeta_faa s_ff - chi_aa/2) a^dag2 a^2
// + ((chi_ea - chi_ab) s_ee + (chi_fa - 2 chi_ab) s_ff) a^dag a
// + (delta + chi_ea/2 + 3|g3|^2/chi_bb) s_ee + (2 delta + chi_fa/2) s_ff
// with |g3|^2 = |eps_4ph|^2/2.  The e/f anti-normal pieces are kept as
// truncated products (chi_ea/4 resp. chi_fa/4 times a^2 a^dag2), so the
// matrix equals the generic frequency-diagonal reduction on the shared
// cutoff, top rungs included.  Junction levels above f (if present) are
// left untouched.
OperatorMatrix build_H_eff(const EffectiveCoeffs& coeffs, const HilbertSpace& space);

struct RwaResult {
    OperatorMatrix h_eff;
    double max_mode_ratio = 0.0;      // max_k ||H_k|| / nu_k
    bool perturbative_ok = true;      // ratio <= 0.3
};

// Frequency-diagonal second-order average of a Fourier Hamiltonian:
//   H_eff = H_static + sum_k [H_k^dag, H_k] / nu_k.
// Cross-frequency products are dropped; near-coincident frequencies are
// rejected by FourierHamiltonian::validate.  Appends a warning (and clears
// perturbative_ok) when some ||H_k||/nu_k exceeds 0.3.
RwaResult second_order_rwa(const FourierHamiltonian& fh,
                           std::vector<std::string>* warnings = nullptr);

} // namespace cascade

#include "cascade/device.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cascade {

DeviceParams DeviceParams::from_hz(double chi_aa_hz, double chi_bb_hz, double chi_ab_hz,
                                   double Delta_hz, double delta_hz, double Gamma_1_hz,
                                   double Gamma_fg_eng_hz, double kappa_1ph_hz) {
    DeviceParams p;
    p.chi_aa = two_pi * chi_aa_hz;
    p.chi_bb = two_pi * chi_bb_hz;
    p.chi_ab = two_pi * chi_ab_hz;
    p.Delta = two_pi * Delta_hz;
    p.delta = two_pi * delta_hz;
    p.Gamma_1 = two_pi * Gamma_1_hz;
    p.Gamma_fg_eng = two_pi * Gamma_fg_eng_hz;
    p.kappa_1ph = two_pi * kappa_1ph_hz;
    return p;
}

void DeviceParams::validate(std::vector<std::string>* warnings) const {
    if (chi_aa < 0.0 || chi_bb < 0.0)
        throw InvalidRegime("DeviceParams: Kerr coefficients must be non-negative");
    if (Delta < 0.0)
        throw InvalidRegime("DeviceParams: Delta must be non-negative");
    if (Gamma_1 < 0.0 || Gamma_fg_eng < 0.0 || kappa_1ph < 0.0)
        throw InvalidRegime("DeviceParams: rates must be non-negative");
    if (chi_bb < 3.0 * Delta)
        throw InvalidRegime("DeviceParams: chi_bb < 3*Delta is outside the dispersive hierarchy");
    if (warnings && chi_bb < 4.0 * Delta)
        warnings->push_back("DeviceParams: chi_bb below 4*Delta; branch separation is marginal");
}

PumpConfig couplings_from_xi(const DeviceParams& params, cd xi1, cd xi2, cd xi3) {
    PumpConfig p;
    p.g1 = -0.5 * params.chi_ab * xi1;
    p.g2 = -0.5 * params.chi_ab * xi2;
    p.g3 = 0.5 * params.chi_bb * std::conj(xi3) * std::conj(xi3);
    p.xi1 = xi1;
    p.xi2 = xi2;
    p.xi3 = xi3;
    return p;
}

void PumpConfig::validate(const DeviceParams& params) const {
    if (!xi1 && !xi2 && !xi3) return;
    if (!(xi1 && xi2 && xi3))
        throw InvalidRegime("PumpConfig: provide either all xi amplitudes or none");
    PumpConfig from_xi = couplings_from_xi(params, *xi1, *xi2, *xi3);
    auto close = [](cd a, cd b) {
        double scale = std::max(std::abs(a), std::abs(b));
        return scale == 0.0 || std::abs(a - b) <= 1e-9 * scale;
    };
    if (!close(from_xi.g1, g1) || !close(from_xi.g2, g2) || !close(from_xi.g3, g3))
        throw InvalidRegime("PumpConfig: xi amplitudes inconsistent with stored couplings");
}

PumpFrequencies pump_frequencies(double omega_a_tilde, double omega_b_tilde,
                                 const DeviceParams& params) {
    PumpFrequencies f{};
    f.omega_p1 = 2.0 * omega_a_tilde - omega_b_tilde - params.Delta + params.delta;
    f.omega_p2 = 2.0 * omega_a_tilde - (omega_b_tilde - params.chi_bb) + params.Delta + params.delta;
    f.omega_p3 = omega_b_tilde - 0.5 * params.chi_bb - 0.5 * params.delta;
    f.raman_detuning_plus = params.Delta;
    f.raman_detuning_minus = -params.Delta;
    return f;
}

StarkShifted stark_shifted_frequencies(double omega_a, double omega_b,
                                       const DeviceParams& params, double xi_sq_sum) {
    StarkShifted s{};
    s.omega_a_tilde = omega_a - params.chi_aa - 0.5 * params.chi_ab - params.chi_ab * xi_sq_sum;
    s.omega_b_tilde = omega_b - params.chi_bb - 0.5 * params.chi_ab - 2.0 * params.chi_bb * xi_sq_sum;
    return s;
}

KerrConsistency kerr_consistency(const DeviceParams& params, std::vector<std::string>* warnings) {
    KerrConsistency k{};
    k.chi_ab_expected = 2.0 * std::sqrt(params.chi_aa * params.chi_bb);
    k.rel_deviation = k.chi_ab_expected > 0.0
                          ? std::abs(params.chi_ab - k.chi_ab_expected) / k.chi_ab_expected
                          : (params.chi_ab == 0.0 ? 0.0 : 1.0);
    k.within_tolerance = k.rel_deviation <= 0.05;
    if (!k.within_tolerance && warnings)
        warnings->push_back("kerr_consistency: chi_ab deviates from 2 sqrt(chi_aa chi_bb) by " +
                            std::to_string(100.0 * k.rel_deviation) + "%");
    return k;
}

ConstraintSolution solve_constraints(const DeviceParams& params, double g2_abs) {
    if (params.Delta <= 0.0)
        throw InvalidRegime("solve_constraints: Delta must be positive");
    if (params.chi_bb <= params.Delta)
        throw InvalidRegime("solve_constraints: requires chi_bb > Delta");
    ConstraintSolution s{};
    const double g2_sq = g2_abs * g2_abs;
    s.g1 = std::sqrt(params.Delta * (0.5 * params.chi_aa + g2_sq / (params.chi_bb + params.Delta)));
    s.chi_fa = 8.0 * g2_sq / params.Delta - 8.0 * s.g1 * s.g1 / (params.chi_bb + params.Delta);
    s.delta = -0.25 * s.chi_fa;
    return s;
}

Matrix FourierHamiltonian::evaluate(double t) const {
    Matrix h = static_part;
    for (const FourierMode& m : modes) {
        cd phase = std::exp(cd(0.0, -m.nu * t));
        h += phase * m.op + std::conj(phase) * m.op.adjoint();
    }
    return h;
}

double FourierHamiltonian::nu_max() const {
    double nu = 0.0;
    for (const FourierMode& m : modes) nu = std::max(nu, m.nu);
    return nu;
}

void FourierHamiltonian::validate() const {
    double scale = static_part.norm();
    if (scale > 0.0 && (static_part - static_part.adjoint()).norm() > 1e-12 * scale)
        throw InvalidState("FourierHamiltonian: static part not Hermitian");
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (!(modes[i].nu > 0.0))
            throw DegenerateDetuning("FourierHamiltonian: non-positive mode frequency");
        for (std::size_t j = i + 1; j < modes.size(); ++j)
            if (std::abs(modes[i].nu - modes[j].nu) <= 1e-9 * std::max(modes[i].nu, modes[j].nu))
                throw DegenerateDetuning("FourierHamiltonian: coincident mode frequencies");
    }
}

FourierHamiltonian build_hsys_fourier(const DeviceParams& params, const PumpConfig& pumps,
                                      const HilbertSpace& space) {
    const int nj = space.junction_dim;
    if (nj < 3 || nj > 4)
        throw InvalidDimension("build_hsys_fourier: junction_dim must be 3 or 4");
    if (space.cavity_dim < 3)
        throw InvalidDimension("build_hsys_fourier: cavity_dim too small");
    pumps.validate(params);

    const Matrix a_full = embed(annihilation(space.cavity_dim), space).m;
    const Matrix a2 = a_full * a_full;
    const Matrix num_c = a_full.adjoint() * a_full;
    auto jt = [&](int from, int to) { return embed(junction_transition(from, to, nj), space).m; };

    Matrix num_j = Matrix::Zero(space.dim(), space.dim());
    for (int j = 1; j < nj; ++j) num_j += static_cast<double>(j) * jt(j, j);

    FourierHamiltonian fh;
    fh.space = space;
    fh.static_part = params.delta * num_j - 0.5 * params.chi_aa * (num_c * num_c - num_c) -
                     params.chi_ab * num_j * num_c;

    // Branch frequencies are exact integer combinations p*chi_bb + q*Delta;
    // bookkeeping on (p, q) makes by-construction merges exact and leaves
    // only genuine collisions to detect numerically.
    std::map<std::pair<int, int>, Matrix> branch;
    auto add_branch = [&](int p, int q, const Matrix& rotating_piece) {
        // rotating_piece carries e^{+i (p chi_bb + q Delta) t}.
        double nu = p * params.chi_bb + q * params.Delta;
        Matrix piece;
        if (nu > 0.0) {
            piece = rotating_piece.adjoint();  // e^{+i nu t} side is H_k^dag
        } else {
            p = -p;
            q = -q;
            piece = rotating_piece;
        }
        auto [it, fresh] = branch.try_emplace({p, q}, piece);
        if (!fresh) it->second += piece;
    };

    const Matrix a2dag = a2.adjoint();
    for (int n = 0; n + 1 < nj; ++n) {
        const double el = std::sqrt(n + 1.0);
        if (pumps.g1 != cd(0.0))
            add_branch(n, 1, pumps.g1 * el * a2dag * jt(n + 1, n));
        if (pumps.g2 != cd(0.0))
            add_branch(n - 1, -1, pumps.g2 * el * a2dag * jt(n + 1, n));
    }
    if (pumps.g3 != cd(0.0)) {
        for (int n = 0; n + 2 < nj; ++n) {
            const double el = std::sqrt((n + 1.0) * (n + 2.0));
            Matrix piece = -pumps.g3 * el * jt(n + 2, n);
            if (n == 0)
                fh.static_part += piece + piece.adjoint();
            else
                add_branch(2 * n, 0, piece);
        }
    }

    for (auto& [pq, op] : branch) {
        double nu = pq.first * params.chi_bb + pq.second * params.Delta;
        if (!(nu > 0.0))
            throw DegenerateDetuning("build_hsys_fourier: pump branch at non-positive frequency");
        fh.modes.push_back({nu, std::move(op)});
    }
    std::sort(fh.modes.begin(), fh.modes.end(),
              [](const FourierMode& x, const FourierMode& y) { return x.nu < y.nu; });
    fh.validate();
    return fh;
}

} // namespace cascade

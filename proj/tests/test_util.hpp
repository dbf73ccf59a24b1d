#pragma once

#include <complex>
#include <random>

#include "cascade/device.hpp"
#include "cascade/op.hpp"

namespace testutil {

using cascade::cd;
using cascade::Matrix;
using cascade::two_pi;

// Nominal device of the reference design: all inputs in Hz, stored in rad/s.
inline cascade::DeviceParams nominal_device(double gamma1_hz = 2e6, double gamma_fg_hz = 0.0) {
    return cascade::DeviceParams::from_hz(312.0, 200e6, 0.5e6, 50e6, -153537.6, gamma1_hz,
                                          gamma_fg_hz);
}

// Pump amplitudes satisfying the self-Kerr cancellation constraint.
inline cascade::PumpConfig nominal_pumps(bool with_g3 = true) {
    cascade::PumpConfig p;
    p.g1 = two_pi * 898776.9467448528;
    p.g2 = two_pi * 2e6;
    p.g3 = with_g3 ? cd(two_pi * 460e3) : cd(0.0);
    return p;
}

inline cd random_unit(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng), u(rng)};
}

inline Matrix random_matrix(int dim, std::mt19937& rng) {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = random_unit(rng);
    return m;
}

inline Matrix random_hermitian(int dim, std::mt19937& rng) {
    Matrix m = random_matrix(dim, rng);
    return 0.5 * (m + Matrix(m.adjoint()));
}

// Random full-rank density matrix.
inline Matrix random_density(int dim, std::mt19937& rng) {
    Matrix g = random_matrix(dim, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return rho;
}

// |x - y| for assertions mixing complex and real operands.
inline double cdist(cd x, cd y) { return std::abs(x - y); }

inline double rel_frobenius(const Matrix& x, const Matrix& y) {
    const double scale = std::max(x.norm(), y.norm());
    return scale > 0.0 ? (x - y).norm() / scale : 0.0;
}

} // namespace testutil

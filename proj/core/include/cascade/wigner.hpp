#pragma once

#include <cstdint>
#include <vector>

#include "cascade/state.hpp"

namespace cascade {

// W(beta) = (2/pi) Tr[D(-beta) rho D(beta) P] with P the photon-number parity.
// Normalization: vacuum gives W(0) = 2/pi; the integral of W over the plane
// is the trace.
struct WignerResult {
    std::vector<cd> beta;
    std::vector<double> w;
    std::vector<std::uint8_t> truncated;  // |beta| too large for the cutoff
};

// rho_cav must be a cavity-only density matrix (use cavity_reduced first).
WignerResult wigner(const Matrix& rho_cav, const std::vector<cd>& grid);

// Square grid [-half_extent, half_extent]^2, imaginary part slow, real fast.
std::vector<cd> wigner_square_grid(double half_extent, int points_per_side);

} // namespace cascade

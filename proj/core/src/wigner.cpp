#include "cascade/wigner.hpp"

#include <cmath>

namespace cascade {

namespace {

// Displacement matrix in the truncated Fock basis from the closed form
//   <n+d| D(beta) |n> = sqrt(n!/(n+d)!) beta^d e^{-|beta|^2/2} L_n^{(d)}(|beta|^2)
// evaluated diagonal by diagonal with the associated-Laguerre recurrence.
Matrix displacement(cd beta, int dim) {
    const double x = std::norm(beta);
    const double gauss = std::exp(-0.5 * x);
    Matrix D(dim, dim);
    cd pow_lo = 1.0;          // beta^d
    cd pow_up = 1.0;          // (-conj(beta))^d
    double inv_sqrt_fact = 1.0;  // 1/sqrt(d!)
    for (int d = 0; d < dim; ++d) {
        if (d > 0) {
            pow_lo *= beta;
            pow_up *= -std::conj(beta);
            inv_sqrt_fact /= std::sqrt(static_cast<double>(d));
        }
        double ratio = inv_sqrt_fact;  // sqrt(n!/(n+d)!) at n = 0
        double Lm1 = 0.0, L = 1.0;     // L_{n-1}^{(d)}, L_n^{(d)}
        for (int n = 0; n + d < dim; ++n) {
            if (n > 0) {
                double next = ((2.0 * n - 1.0 + d - x) * L - (n - 1.0 + d) * Lm1) / n;
                Lm1 = L;
                L = next;
                ratio *= std::sqrt(n / (n + static_cast<double>(d)));
            }
            D(n + d, n) = pow_lo * gauss * ratio * L;
            if (d > 0) D(n, n + d) = pow_up * gauss * ratio * L;
        }
    }
    return D;
}

} // namespace

WignerResult wigner(const Matrix& rho_cav, const std::vector<cd>& grid) {
    const int dim = static_cast<int>(rho_cav.rows());
    if (dim < 1 || rho_cav.cols() != dim)
        throw SpaceMismatch("wigner: rho must be square");
    const double beta_safe = 0.5 * std::sqrt(static_cast<double>(dim));
    WignerResult out;
    out.beta = grid;
    out.w.resize(grid.size());
    out.truncated.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cd b = grid[i];
        Matrix D = displacement(b, dim);
        Matrix P = rho_cav * D;
        cd acc = 0.0;
        for (int k = 0; k < dim; ++k) {
            cd v = D.col(k).dot(P.col(k));  // <d_k| rho |d_k>
            acc += (k % 2 == 0) ? v : -v;
        }
        out.w[i] = (2.0 / M_PI) * acc.real();
        out.truncated[i] = std::abs(b) > beta_safe ? 1 : 0;
    }
    return out;
}

std::vector<cd> wigner_square_grid(double half_extent, int points_per_side) {
    if (points_per_side < 2) throw InvalidDimension("wigner_square_grid: need >= 2 points per side");
    std::vector<cd> g;
    g.reserve(static_cast<std::size_t>(points_per_side) * points_per_side);
    const double step = 2.0 * half_extent / (points_per_side - 1);
    for (int iy = 0; iy < points_per_side; ++iy)
        for (int ix = 0; ix < points_per_side; ++ix)
            g.emplace_back(-half_extent + ix * step, -half_extent + iy * step);
    return g;
}

} // namespace cascade

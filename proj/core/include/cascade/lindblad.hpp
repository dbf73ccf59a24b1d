#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "cascade/device.hpp"

namespace cascade {

using SparseMatrix = Eigen::SparseMatrix<cd>;

SparseMatrix to_sparse(const Matrix& dense, double prune_rel = 1e-15);

struct CollapseOp {
    double rate;  // rad/s
    SparseMatrix L;
    std::string label;
};

// drho/dt = -i [H(t), rho] + sum_j rate_j D[L_j] rho, with
// H(t) = h_static + sum_k (h_k e^{-i nu_k t} + h.c.).  Operators are stored
// sparse; every physically relevant generator here is.
struct LindbladModel {
    HilbertSpace space;
    SparseMatrix h_static;
    std::vector<std::pair<double, SparseMatrix>> modes;  // (nu, h_k)
    std::vector<CollapseOp> collapse;

    bool unitary() const { return collapse.empty(); }
    double nu_max() const;
    Matrix hamiltonian_at(double t) const;
};

// Wraps a dense Fourier Hamiltonian plus collapse operators.
LindbladModel make_model(const FourierHamiltonian& fh, std::vector<CollapseOp> collapse = {});

} // namespace cascade

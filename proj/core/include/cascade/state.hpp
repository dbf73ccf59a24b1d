#pragma once

#include <string>
#include <vector>

#include "cascade/op.hpp"

namespace cascade {

// Pure state vector or density matrix on a HilbertSpace.  Constructors
// validate: pure norm within 1e-12 of 1; densities Hermitian (1e-12 relative),
// unit trace within 1e-10, smallest eigenvalue >= -1e-8.
struct QuantumState {
    HilbertSpace space;
    bool density = false;
    Vector psi;
    Matrix rho;

    static QuantumState pure(const HilbertSpace& space, Vector v);
    static QuantumState from_density(const HilbertSpace& space, Matrix r);

    // |psi><psi| for pure states, rho unchanged otherwise.
    Matrix density_matrix() const;
};

// Cavity-only space (junction_dim = 1).
inline HilbertSpace cavity_space(int dim) { return HilbertSpace(dim, 1); }

// Basis vector |junction j, cavity n> on the full space.
QuantumState basis_state(const HilbertSpace& space, int junction, int cavity);

// Truncated coherent state on a cavity-only space, c_n = e^{-|a|^2/2} a^n/sqrt(n!),
// renormalized after truncation.  Appends a warning when the captured weight
// falls below 1 - 1e-6.
QuantumState coherent_state(cd alpha, int dim, std::vector<std::string>* warnings = nullptr);

// Four-component cat N(|a> + |-a> + |ia> + |-ia>): support on photon numbers
// n = 0 mod 4 only.  alpha = 0 degenerates to vacuum.
QuantumState cat_state_mod4(cd alpha, int dim, std::vector<std::string>* warnings = nullptr);

struct StateMetrics {
    double fidelity;  // <target| rho |target>
    double purity;    // Tr rho^2
    double parity;    // Tr[rho (-1)^{n_cavity}]
};

StateMetrics state_metrics(const QuantumState& state, const QuantumState& target);

double purity(const Matrix& rho);
// Cavity photon-number parity; works on full and cavity-only spaces.
double cavity_parity(const QuantumState& state);
double trace_distance(const Matrix& a, const Matrix& b);

// Partial trace over the junction mode.
Matrix cavity_reduced(const QuantumState& state);

} // namespace cascade

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "cascade/space.hpp"

namespace cascade {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class OpSpace { cavity, junction, full };

// Dense operator tagged with the space it acts on.  Single-mode operators
// (OpSpace::cavity / OpSpace::junction) only know their own dimension and must
// be embedded into a full HilbertSpace before they can be combined with full
// operators; mixing tags raises SpaceMismatch.
struct OperatorMatrix {
    OpSpace tag = OpSpace::full;
    HilbertSpace space;  // single-mode tags fill only their own dimension slot
    Matrix m;

    int dim() const { return static_cast<int>(m.rows()); }

    OperatorMatrix adjoint() const { return {tag, space, m.adjoint()}; }

    bool is_hermitian(double rel_tol = 1e-12) const {
        double scale = m.norm();
        if (scale == 0.0) return true;
        return (m - m.adjoint()).norm() <= rel_tol * scale;
    }

    OperatorMatrix& operator+=(const OperatorMatrix& o);
    OperatorMatrix& operator-=(const OperatorMatrix& o);
    friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
    friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator*(cd s, OperatorMatrix a) { a.m *= s; return a; }
};

// <n-1| a |n> = sqrt(n).  dim >= 2 required.
OperatorMatrix annihilation(int dim);

// sigma_jk = |k><j| on the junction mode (maps level j to level k).
OperatorMatrix junction_transition(int from_j, int to_k, int dim);

// Tensor with identity on the other mode, junction factor slow.
OperatorMatrix embed(const OperatorMatrix& op, const HilbertSpace& space);

// Identity on the full space.
OperatorMatrix identity_op(const HilbertSpace& space);

// D[L]rho = L rho L^dag - 1/2 {L^dag L, rho}.  Always traceless; Hermitian
// for Hermitian rho.
Matrix dissipator_apply(const Matrix& L, const Matrix& rho);

} // namespace cascade

#include "cascade/op.hpp"

#include <cmath>

namespace cascade {

namespace {

void require_same(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.tag != b.tag)
        throw SpaceMismatch("operator combination: mixed space tags (embed single-mode operators first)");
    if (a.m.rows() != b.m.rows())
        throw SpaceMismatch("operator combination: dimension mismatch");
    if (a.tag == OpSpace::full && a.space != b.space)
        throw SpaceMismatch("operator combination: different full spaces");
}

} // namespace

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& o) {
    require_same(*this, o);
    m += o.m;
    return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& o) {
    require_same(*this, o);
    m -= o.m;
    return *this;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same(a, b);
    return {a.tag, a.space, a.m * b.m};
}

OperatorMatrix annihilation(int dim) {
    if (dim < 2) throw InvalidDimension("annihilation: dim must be >= 2");
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    HilbertSpace sp;
    sp.cavity_dim = dim;
    sp.junction_dim = 0;  // unspecified until embedded
    return {OpSpace::cavity, sp, a};
}

OperatorMatrix junction_transition(int from_j, int to_k, int dim) {
    if (dim < 2) throw InvalidDimension("junction_transition: dim must be >= 2");
    if (from_j < 0 || from_j >= dim || to_k < 0 || to_k >= dim)
        throw InvalidDimension("junction_transition: level out of range");
    Matrix s = Matrix::Zero(dim, dim);
    s(to_k, from_j) = 1.0;
    HilbertSpace sp;
    sp.cavity_dim = 0;
    sp.junction_dim = dim;
    return {OpSpace::junction, sp, s};
}

OperatorMatrix embed(const OperatorMatrix& op, const HilbertSpace& space) {
    const int nc = space.cavity_dim, nj = space.junction_dim;
    Matrix full = Matrix::Zero(space.dim(), space.dim());
    if (op.tag == OpSpace::cavity) {
        if (op.dim() != nc) throw SpaceMismatch("embed: cavity dimension mismatch");
        for (int j = 0; j < nj; ++j)
            full.block(j * nc, j * nc, nc, nc) = op.m;
    } else if (op.tag == OpSpace::junction) {
        if (op.dim() != nj) throw SpaceMismatch("embed: junction dimension mismatch");
        for (int j = 0; j < nj; ++j)
            for (int k = 0; k < nj; ++k)
                if (op.m(j, k) != cd(0.0))
                    full.block(j * nc, k * nc, nc, nc) = op.m(j, k) * Matrix::Identity(nc, nc);
    } else {
        if (op.space != space) throw SpaceMismatch("embed: operator already on a different full space");
        return op;
    }
    return {OpSpace::full, space, full};
}

OperatorMatrix identity_op(const HilbertSpace& space) {
    return {OpSpace::full, space, Matrix::Identity(space.dim(), space.dim())};
}

Matrix dissipator_apply(const Matrix& L, const Matrix& rho) {
    if (L.rows() != rho.rows() || L.cols() != rho.cols() || rho.rows() != rho.cols())
        throw SpaceMismatch("dissipator_apply: dimension mismatch");
    Matrix Lr = L * rho;
    Matrix LdL = L.adjoint() * L;
    return Lr * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
}

} // namespace cascade

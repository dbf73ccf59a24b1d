#include "cascade/lindblad.hpp"

namespace cascade {

SparseMatrix to_sparse(const Matrix& dense, double prune_rel) {
    const double scale = dense.size() > 0 ? dense.cwiseAbs().maxCoeff() : 0.0;
    const double cutoff = prune_rel * scale;
    std::vector<Eigen::Triplet<cd>> trip;
    for (int j = 0; j < dense.cols(); ++j)
        for (int i = 0; i < dense.rows(); ++i)
            if (std::abs(dense(i, j)) > cutoff) trip.emplace_back(i, j, dense(i, j));
    SparseMatrix s(dense.rows(), dense.cols());
    s.setFromTriplets(trip.begin(), trip.end());
    s.makeCompressed();
    return s;
}

double LindbladModel::nu_max() const {
    double nu = 0.0;
    for (const auto& [f, op] : modes) nu = std::max(nu, f);
    return nu;
}

Matrix LindbladModel::hamiltonian_at(double t) const {
    Matrix h = Matrix(h_static);
    for (const auto& [nu, op] : modes) {
        cd phase = std::exp(cd(0.0, -nu * t));
        Matrix dense_op = Matrix(op);
        h += phase * dense_op + std::conj(phase) * dense_op.adjoint();
    }
    return h;
}

LindbladModel make_model(const FourierHamiltonian& fh, std::vector<CollapseOp> collapse) {
    fh.validate();
    LindbladModel m;
    m.space = fh.space;
    m.h_static = to_sparse(fh.static_part);
    for (const FourierMode& mode : fh.modes)
        m.modes.emplace_back(mode.nu, to_sparse(mode.op));
    for (CollapseOp& c : collapse) {
        if (c.L.rows() != fh.space.dim())
            throw SpaceMismatch("make_model: collapse operator dimension mismatch");
        if (c.rate < 0.0) throw InvalidRegime("make_model: negative collapse rate");
    }
    m.collapse = std::move(collapse);
    return m;
}

} // namespace cascade

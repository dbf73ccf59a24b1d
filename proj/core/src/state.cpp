#include "cascade/state.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace cascade {

QuantumState QuantumState::pure(const HilbertSpace& space, Vector v) {
    if (v.size() != space.dim()) throw SpaceMismatch("QuantumState::pure: wrong length");
    if (std::abs(v.norm() - 1.0) > 1e-12)
        throw InvalidState("QuantumState::pure: not normalized");
    QuantumState s;
    s.space = space;
    s.density = false;
    s.psi = std::move(v);
    return s;
}

QuantumState QuantumState::from_density(const HilbertSpace& space, Matrix r) {
    if (r.rows() != space.dim() || r.cols() != space.dim())
        throw SpaceMismatch("QuantumState::from_density: wrong shape");
    double scale = r.norm();
    if (scale > 0.0 && (r - r.adjoint()).norm() > 1e-12 * scale)
        throw InvalidState("QuantumState::from_density: not Hermitian");
    if (std::abs(r.trace().real() - 1.0) > 1e-10 || std::abs(r.trace().imag()) > 1e-10)
        throw InvalidState("QuantumState::from_density: trace != 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(r, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw InvalidState("QuantumState::from_density: negative eigenvalue");
    QuantumState s;
    s.space = space;
    s.density = true;
    s.rho = std::move(r);
    return s;
}

Matrix QuantumState::density_matrix() const {
    if (density) return rho;
    return psi * psi.adjoint();
}

QuantumState basis_state(const HilbertSpace& space, int junction, int cavity) {
    Vector v = Vector::Zero(space.dim());
    v(space.index(junction, cavity)) = 1.0;
    return QuantumState::pure(space, std::move(v));
}

namespace {

// Unnormalized coherent amplitudes and the truncated weight sum.
Vector coherent_amplitudes(cd alpha, int dim, double& weight) {
    Vector c(dim);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    weight = c.squaredNorm();
    return c;
}

} // namespace

QuantumState coherent_state(cd alpha, int dim, std::vector<std::string>* warnings) {
    if (dim < 1) throw InvalidDimension("coherent_state: dim must be >= 1");
    double weight = 0.0;
    Vector c = coherent_amplitudes(alpha, dim, weight);
    if (weight < 1.0 - 1e-6 && warnings)
        warnings->push_back("coherent_state: truncation captures only " + std::to_string(weight) +
                            " of the norm; increase cavity_dim");
    c /= std::sqrt(weight);
    return QuantumState::pure(cavity_space(dim), std::move(c));
}

QuantumState cat_state_mod4(cd alpha, int dim, std::vector<std::string>* warnings) {
    if (dim < 1) throw InvalidDimension("cat_state_mod4: dim must be >= 1");
    const cd i(0.0, 1.0);
    double w = 0.0, wtot = 0.0;
    Vector v = Vector::Zero(dim);
    for (const cd& a : {alpha, -alpha, i * alpha, -i * alpha}) {
        v += coherent_amplitudes(a, dim, w);
        wtot += w;
    }
    if (wtot < 4.0 * (1.0 - 1e-6) && warnings)
        warnings->push_back("cat_state_mod4: coherent components truncated; increase cavity_dim");
    // Components interfere away except on n = 0 mod 4; clean the residue so
    // downstream parity checks see exact support.
    for (int n = 0; n < dim; ++n)
        if (n % 4 != 0) v(n) = 0.0;
    v /= v.norm();
    return QuantumState::pure(cavity_space(dim), std::move(v));
}

StateMetrics state_metrics(const QuantumState& state, const QuantumState& target) {
    if (state.space != target.space) throw SpaceMismatch("state_metrics: spaces differ");
    if (target.density) throw InvalidState("state_metrics: target must be pure");
    StateMetrics out{};
    if (state.density) {
        out.fidelity = (target.psi.adjoint() * state.rho * target.psi)(0).real();
        out.purity = purity(state.rho);
    } else {
        out.fidelity = std::norm(target.psi.dot(state.psi));
        out.purity = 1.0;
    }
    out.parity = cavity_parity(state);
    return out;
}

double purity(const Matrix& rho) { return (rho * rho).trace().real(); }

double cavity_parity(const QuantumState& state) {
    const HilbertSpace& sp = state.space;
    double p = 0.0;
    if (state.density) {
        for (int k = 0; k < sp.dim(); ++k) {
            double sign = (sp.cavity_of(k) % 2 == 0) ? 1.0 : -1.0;
            p += sign * state.rho(k, k).real();
        }
    } else {
        for (int k = 0; k < sp.dim(); ++k) {
            double sign = (sp.cavity_of(k) % 2 == 0) ? 1.0 : -1.0;
            p += sign * std::norm(state.psi(k));
        }
    }
    return p;
}

double trace_distance(const Matrix& a, const Matrix& b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a - b, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Matrix cavity_reduced(const QuantumState& state) {
    const HilbertSpace& sp = state.space;
    const int nc = sp.cavity_dim, nj = sp.junction_dim;
    Matrix out = Matrix::Zero(nc, nc);
    Matrix full = state.density_matrix();
    for (int j = 0; j < nj; ++j)
        out += full.block(j * nc, j * nc, nc, nc);
    return out;
}

} // namespace cascade

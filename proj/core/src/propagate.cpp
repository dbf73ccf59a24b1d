#include "cascade/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

constexpr double kTraceTol = 1e-7;
constexpr double kPurityTol = 1e-7;
constexpr double kHermTol = 1e-9;

// Single sparse matrix holding the union sparsity pattern of the static part
// and every Fourier mode (plus adjoints); evaluation rewrites the value array
// in place, so each Hamiltonian application is one sparse-dense product.
class HamiltonianAssembler {
public:
    explicit HamiltonianAssembler(const LindbladModel& model) {
        const int n = model.space.dim();
        std::vector<Eigen::Triplet<cd>> trip;
        auto pattern_of = [&trip](const SparseMatrix& m) {
            for (int k = 0; k < m.outerSize(); ++k)
                for (SparseMatrix::InnerIterator it(m, k); it; ++it)
                    trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                                      cd(1.0, 0.0));
        };
        pattern_of(model.h_static);
        std::vector<SparseMatrix> adjoints;
        adjoints.reserve(model.modes.size());
        for (const auto& [nu, m] : model.modes) {
            pattern_of(m);
            adjoints.emplace_back(m.adjoint());
            pattern_of(adjoints.back());
        }
        work_.resize(n, n);
        work_.setFromTriplets(trip.begin(), trip.end());
        work_.makeCompressed();

        collect(model.h_static, static_entries_);
        modes_.resize(model.modes.size());
        for (size_t i = 0; i < model.modes.size(); ++i) {
            modes_[i].nu = model.modes[i].first;
            collect(model.modes[i].second, modes_[i].fwd);
            collect(adjoints[i], modes_[i].bwd);
        }
        if (modes_.empty()) fill(0.0);
    }

    const SparseMatrix& at(double t) {
        if (!modes_.empty()) fill(t);
        return work_;
    }

private:
    struct Mode {
        double nu = 0.0;
        std::vector<std::pair<int, cd>> fwd, bwd;
    };

    int locate(int row, int col) const {
        const auto* inner = work_.innerIndexPtr();
        const int lo = work_.outerIndexPtr()[col];
        const int hi = work_.outerIndexPtr()[col + 1];
        const auto* it = std::lower_bound(inner + lo, inner + hi, row);
        return static_cast<int>(it - inner);
    }

    void collect(const SparseMatrix& m, std::vector<std::pair<int, cd>>& out) {
        for (int k = 0; k < m.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(m, k); it; ++it)
                out.emplace_back(locate(static_cast<int>(it.row()), static_cast<int>(it.col())),
                                 it.value());
    }

    void fill(double t) {
        cd* v = work_.valuePtr();
        std::fill(v, v + work_.nonZeros(), cd(0.0, 0.0));
        for (const auto& [i, val] : static_entries_) v[i] += val;
        for (const auto& m : modes_) {
            const cd ph = std::exp(cd(0.0, -m.nu * t));
            for (const auto& [i, val] : m.fwd) v[i] += ph * val;
            const cd phc = std::conj(ph);
            for (const auto& [i, val] : m.bwd) v[i] += phc * val;
        }
    }

    SparseMatrix work_;
    std::vector<std::pair<int, cd>> static_entries_;
    std::vector<Mode> modes_;
};

// Master-equation right-hand sides built from Hermiticity-preserving pieces:
// every term enters as X + X^dag, so a Hermitian rho stays Hermitian to
// rounding regardless of step size.
class RhsEngine {
public:
    explicit RhsEngine(const LindbladModel& model) : model_(model), h_(model) {
        const int n = model.space.dim();
        c_.resize(n, n);
        if (!model.collapse.empty()) {
            SparseMatrix k(n, n);
            for (const auto& c : model.collapse) {
                ladj_.emplace_back(c.L.adjoint());
                k = (k + SparseMatrix(c.rate * SparseMatrix(ladj_.back() * c.L))).pruned();
            }
            k.makeCompressed();
            k_ = std::move(k);
        }
    }

    void density(double t, const Matrix& rho, Matrix& out) {
        const SparseMatrix& h = h_.at(t);
        c_.noalias() = h * rho;
        out.noalias() = cd(0.0, -1.0) * (c_ - c_.adjoint());
        if (k_.nonZeros() > 0) {
            c_.noalias() = k_ * rho;
            out.noalias() -= 0.5 * (c_ + c_.adjoint());
        }
        for (size_t i = 0; i < model_.collapse.size(); ++i) {
            c_.noalias() = model_.collapse[i].L * rho;
            out.noalias() += model_.collapse[i].rate * (c_ * ladj_[i]);
        }
    }

    void pure(double t, const Vector& psi, Vector& out) {
        out.noalias() = h_.at(t) * psi;
        out *= cd(0.0, -1.0);
    }

private:
    const LindbladModel& model_;
    HamiltonianAssembler h_;
    std::vector<SparseMatrix> ladj_;
    SparseMatrix k_;
    Matrix c_;
};

// The exact flow maps Hermitian matrices to Hermitian matrices, but at the
// step-size stability boundary the integrator amplifies roundoff in the
// anti-Hermitian sector just like any other mode.  Projecting after every
// accepted step keeps the state on the physical manifold; the per-step
// projection distance stays at roundoff level.
template <class Y>
void project_hermitian(Y& y) {
    if constexpr (std::is_same_v<Y, Matrix>) {
        Matrix adj = y.adjoint();
        y += adj;
        y *= 0.5;
    }
}

// Dormand-Prince 5(4) with FSAL and an I step controller; the proposed step
// never exceeds hmax (Fourier resolution ceiling and user cap).
template <class Y>
class Dopri5 {
public:
    using Rhs = std::function<void(double, const Y&, Y&)>;

    Dopri5(Rhs f, const Y& proto, double rtol, double atol, double hmax, long max_steps)
        : f_(std::move(f)), rtol_(rtol), atol_(atol), hmax_(hmax), max_steps_(max_steps) {
        k1_ = k2_ = k3_ = k4_ = k5_ = k6_ = k7_ = ytmp_ = yerr_ = proto;
    }

    void advance(double& t, Y& y, double t_end) {
        if (t_end <= t) return;
        if (h_ == 0.0) init_step(t, y, t_end);
        while (t < t_end) {
            double h = t_end - t;
            bool last = true;
            if (h > h_) {
                h = h_;
                last = false;
            }
            if (!fresh_k1_) {
                f_(t, y, k1_);
                ++n_rhs;
                fresh_k1_ = true;
            }
            step(t, y, h);
            n_rhs += 6;
            const double err = error_norm(y);
            if (!std::isfinite(err)) {
                ++n_rejected;
                h_ = 0.1 * h;
                fresh_k1_ = true;  // k1 still belongs to (t, y)
            } else if (err <= 1.0) {
                t = last ? t_end : t + h;
                y.swap(ytmp_);
                k1_.swap(k7_);
                // FSAL derivative predates the projection; the mismatch is at
                // roundoff level and far below the error floor.
                project_hermitian(y);
                ++n_accepted;
                double fac = err > 1e-30 ? 0.9 * std::pow(err, -0.2) : 5.0;
                fac = std::clamp(fac, 0.2, 5.0);
                h_ = last ? std::max(h_, h * fac) : h * fac;
            } else {
                ++n_rejected;
                h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            }
            if (hmax_ > 0.0) h_ = std::min(h_, hmax_);
            if (n_accepted + n_rejected > max_steps_)
                throw IntegrationFailure("adaptive step budget exhausted", t);
            if (h_ <= 1e-15 * std::max(std::abs(t), std::abs(t_end)))
                throw IntegrationFailure("step size underflow", t);
        }
    }

    long n_accepted = 0, n_rejected = 0, n_rhs = 0;

private:
    void init_step(double t, const Y& y, double t_end) {
        f_(t, y, k1_);
        ++n_rhs;
        fresh_k1_ = true;
        const double dy = k1_.norm();
        const double scale = atol_ + rtol_ * y.norm();
        double h0 = dy > 0.0 ? 0.01 * scale / dy : (t_end - t) / 100.0;
        h0 = std::min(h0, t_end - t);
        if (hmax_ > 0.0) h0 = std::min(h0, hmax_);
        h_ = std::max(h0, 1e-18);
    }

    // One trial step: ytmp_ <- 5th order solution, yerr_ <- embedded error,
    // k7_ <- derivative at the trial endpoint (FSAL candidate).
    void step(double t, const Y& y, double h) {
        ytmp_ = y + (h * (1.0 / 5.0)) * k1_;
        f_(t + h * (1.0 / 5.0), ytmp_, k2_);
        ytmp_ = y + (h * (3.0 / 40.0)) * k1_ + (h * (9.0 / 40.0)) * k2_;
        f_(t + h * (3.0 / 10.0), ytmp_, k3_);
        ytmp_ = y + (h * (44.0 / 45.0)) * k1_ + (h * (-56.0 / 15.0)) * k2_ +
                (h * (32.0 / 9.0)) * k3_;
        f_(t + h * (4.0 / 5.0), ytmp_, k4_);
        ytmp_ = y + (h * (19372.0 / 6561.0)) * k1_ + (h * (-25360.0 / 2187.0)) * k2_ +
                (h * (64448.0 / 6561.0)) * k3_ + (h * (-212.0 / 729.0)) * k4_;
        f_(t + h * (8.0 / 9.0), ytmp_, k5_);
        ytmp_ = y + (h * (9017.0 / 3168.0)) * k1_ + (h * (-355.0 / 33.0)) * k2_ +
                (h * (46732.0 / 5247.0)) * k3_ + (h * (49.0 / 176.0)) * k4_ +
                (h * (-5103.0 / 18656.0)) * k5_;
        f_(t + h, ytmp_, k6_);
        ytmp_ = y + (h * (35.0 / 384.0)) * k1_ + (h * (500.0 / 1113.0)) * k3_ +
                (h * (125.0 / 192.0)) * k4_ + (h * (-2187.0 / 6784.0)) * k5_ +
                (h * (11.0 / 84.0)) * k6_;
        f_(t + h, ytmp_, k7_);
        yerr_ = (h * (71.0 / 57600.0)) * k1_ + (h * (-71.0 / 16695.0)) * k3_ +
                (h * (71.0 / 1920.0)) * k4_ + (h * (-17253.0 / 339200.0)) * k5_ +
                (h * (22.0 / 525.0)) * k6_ + (h * (-1.0 / 40.0)) * k7_;
    }

    // Uniform scale: the largest entry sets the tolerance for the whole
    // state, so barely populated fast sectors cannot pin the step size.
    double error_norm(const Y& y_old) const {
        const double ymax = std::max(y_old.cwiseAbs().maxCoeff(), ytmp_.cwiseAbs().maxCoeff());
        return yerr_.cwiseAbs().maxCoeff() / (atol_ + rtol_ * ymax);
    }

    Rhs f_;
    double rtol_, atol_, hmax_;
    long max_steps_;
    double h_ = 0.0;
    bool fresh_k1_ = false;
    Y k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, yerr_;
};

// Classic RK4 with each advance interval divided into equal substeps; sample
// grids therefore reproduce bitwise across runs.
template <class Y>
class Rk4Fixed {
public:
    using Rhs = std::function<void(double, const Y&, Y&)>;

    Rk4Fixed(Rhs f, const Y& proto, double dt, long max_steps)
        : f_(std::move(f)), dt_(dt), max_steps_(max_steps) {
        k1_ = k2_ = k3_ = k4_ = ytmp_ = proto;
    }

    void advance(double& t, Y& y, double t_end) {
        const double span = t_end - t;
        if (span <= 0.0) return;
        long n = static_cast<long>(std::ceil(span / dt_ - 1e-9));
        n = std::max(n, 1L);
        const double h = span / static_cast<double>(n);
        const double t0 = t;
        for (long i = 0; i < n; ++i) {
            const double ti = t0 + span * static_cast<double>(i) / static_cast<double>(n);
            f_(ti, y, k1_);
            ytmp_ = y + (0.5 * h) * k1_;
            f_(ti + 0.5 * h, ytmp_, k2_);
            ytmp_ = y + (0.5 * h) * k2_;
            f_(ti + 0.5 * h, ytmp_, k3_);
            ytmp_ = y + h * k3_;
            f_(ti + h, ytmp_, k4_);
            y += (h / 6.0) * k1_ + (h / 3.0) * k2_ + (h / 3.0) * k3_ + (h / 6.0) * k4_;
            project_hermitian(y);
            n_rhs += 4;
            ++n_accepted;
            if (n_accepted > max_steps_) throw IntegrationFailure("fixed step budget exhausted", ti);
        }
        t = t_end;
    }

    long n_accepted = 0, n_rejected = 0, n_rhs = 0;

private:
    Rhs f_;
    double dt_;
    long max_steps_;
    Y k1_, k2_, k3_, k4_, ytmp_;
};

std::vector<double> build_grid(const PropagateOptions& opts) {
    std::vector<double> grid;
    if (!opts.sample_times.empty()) {
        grid = opts.sample_times;
    } else if (opts.sample_interval > 0.0) {
        const double span = opts.t1 - opts.t0;
        long n = std::lround(span / opts.sample_interval);
        n = std::max(n, 1L);
        grid.reserve(static_cast<size_t>(n) + 1);
        for (long i = 0; i <= n; ++i)
            grid.push_back(opts.t0 + span * static_cast<double>(i) / static_cast<double>(n));
    } else {
        grid = {opts.t0, opts.t1};
    }
    const double span = std::max(opts.t1 - opts.t0, 0.0);
    const double tol = 1e-9 * span + 1e-18;
    for (double ts : opts.snapshot_times) {
        if (ts < opts.t0 - tol || ts > opts.t1 + tol)
            throw InvalidState("snapshot time outside the integration window");
        auto it = std::lower_bound(grid.begin(), grid.end(), ts - tol);
        if (it == grid.end() || std::abs(*it - ts) > tol) grid.insert(it, ts);
    }
    if (grid.front() < opts.t0 - tol || grid.back() > opts.t1 + tol)
        throw InvalidState("sample grid extends outside [t0, t1]");
    for (size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw InvalidState("sample grid must be strictly increasing");
    return grid;
}

bool is_snapshot_time(const PropagateOptions& opts, double t) {
    const double span = std::max(opts.t1 - opts.t0, 0.0);
    const double tol = 1e-9 * span + 1e-18;
    for (double ts : opts.snapshot_times)
        if (std::abs(ts - t) <= tol) return true;
    return false;
}

double evaluate_density(const Observable& obs, const Matrix& rho) {
    switch (obs.kind) {
        case Observable::Kind::expectation: {
            cd sum(0.0, 0.0);
            for (int k = 0; k < obs.op.outerSize(); ++k)
                for (SparseMatrix::InnerIterator it(obs.op, k); it; ++it)
                    sum += it.value() * rho(it.col(), it.row());
            return sum.real();
        }
        case Observable::Kind::fidelity:
            return obs.target.dot(rho * obs.target).real();
        case Observable::Kind::purity:
            return rho.squaredNorm();  // Tr rho^2 for Hermitian rho
    }
    return 0.0;
}

double evaluate_pure(const Observable& obs, const Vector& psi) {
    switch (obs.kind) {
        case Observable::Kind::expectation:
            return psi.dot(obs.op * psi).real();
        case Observable::Kind::fidelity:
            return std::norm(obs.target.dot(psi));
        case Observable::Kind::purity:
            return 1.0;
    }
    return 0.0;
}

void check_density_invariants(const Matrix& rho, double t) {
    const cd tr = rho.trace();
    if (std::abs(tr - cd(1.0, 0.0)) > kTraceTol)
        throw AbortedTrajectory("density trace drifted beyond 1e-7", t);
    const double scale = rho.norm();
    if (scale > 0.0 && (rho - rho.adjoint()).norm() > kHermTol * scale)
        throw AbortedTrajectory("density lost Hermiticity beyond 1e-9", t);
    if (rho.squaredNorm() > 1.0 + kPurityTol)
        throw AbortedTrajectory("density purity exceeded 1 + 1e-7", t);
}

void check_pure_invariants(const Vector& psi, double t) {
    if (std::abs(psi.squaredNorm() - 1.0) > kTraceTol)
        throw AbortedTrajectory("state norm drifted beyond 1e-7", t);
}

template <class Y>
QuantumState wrap_state(const HilbertSpace& space, const Y& y) {
    // Raw integrator output: invariants are enforced separately with
    // integration tolerances, not the stricter constructor ones.
    QuantumState s;
    s.space = space;
    if constexpr (std::is_same_v<Y, Vector>) {
        s.density = false;
        s.psi = y;
    } else {
        s.density = true;
        s.rho = y;
    }
    return s;
}

template <class Y, class Stepper>
Trajectory run_trajectory(const LindbladModel& model, Y y, const PropagateOptions& opts,
                          const std::vector<Observable>& observables, Stepper& stepper) {
    constexpr bool is_pure = std::is_same_v<Y, Vector>;
    const std::vector<double> grid = build_grid(opts);

    Trajectory traj;
    for (const auto& o : observables) traj.labels.push_back(o.label);
    traj.times.reserve(grid.size());
    traj.rows.reserve(grid.size());

    double t = opts.t0;
    for (double target : grid) {
        stepper.advance(t, y, target);
        if (opts.check_invariants) {
            if constexpr (is_pure)
                check_pure_invariants(y, t);
            else
                check_density_invariants(y, t);
        }
        traj.times.push_back(t);
        std::vector<double> row(observables.size());
        for (size_t k = 0; k < observables.size(); ++k) {
            if constexpr (is_pure)
                row[k] = evaluate_pure(observables[k], y);
            else
                row[k] = evaluate_density(observables[k], y);
        }
        traj.rows.push_back(std::move(row));
        if (is_snapshot_time(opts, t)) traj.snapshots.push_back({t, wrap_state(model.space, y)});
        if (opts.stop_when && opts.stop_when(t, wrap_state(model.space, y))) {
            traj.stopped_early = true;
            break;
        }
    }
    traj.final_state = wrap_state(model.space, y);
    traj.n_accepted = stepper.n_accepted;
    traj.n_rejected = stepper.n_rejected;
    traj.n_rhs = stepper.n_rhs;
    return traj;
}

template <class Y>
Trajectory dispatch(const LindbladModel& model, Y y, const PropagateOptions& opts,
                    const std::vector<Observable>& observables,
                    std::function<void(double, const Y&, Y&)> rhs) {
    double hmax = opts.max_dt;
    const double nu = model.nu_max();
    if (nu > 0.0) {
        const double ceiling = (two_pi / nu) / 20.0;
        hmax = hmax > 0.0 ? std::min(hmax, ceiling) : ceiling;
    }
    if (opts.fixed_dt > 0.0) {
        double dt = opts.fixed_dt;
        if (hmax > 0.0) dt = std::min(dt, hmax);
        Rk4Fixed<Y> stepper(std::move(rhs), y, dt, opts.max_steps);
        return run_trajectory(model, std::move(y), opts, observables, stepper);
    }
    Dopri5<Y> stepper(std::move(rhs), y, opts.rtol, opts.atol, hmax, opts.max_steps);
    return run_trajectory(model, std::move(y), opts, observables, stepper);
}

}  // namespace

Observable Observable::expectation(std::string label, const OperatorMatrix& full_op) {
    if (full_op.tag != OpSpace::full)
        throw SpaceMismatch("observable operators must be embedded in the full space");
    Observable o;
    o.kind = Kind::expectation;
    o.label = std::move(label);
    o.op = to_sparse(full_op.m);
    return o;
}

Observable Observable::population(std::string label, const QuantumState& basis) {
    return fidelity(std::move(label), basis);
}

Observable Observable::fidelity(std::string label, const QuantumState& target_pure) {
    if (target_pure.density) throw InvalidState("fidelity observable needs a pure target");
    Observable o;
    o.kind = Kind::fidelity;
    o.label = std::move(label);
    o.target = target_pure.psi;
    return o;
}

Observable Observable::purity(std::string label) {
    Observable o;
    o.kind = Kind::purity;
    o.label = std::move(label);
    return o;
}

Observable Observable::parity(std::string label, const HilbertSpace& space) {
    Matrix p = Matrix::Zero(space.dim(), space.dim());
    for (int k = 0; k < space.dim(); ++k)
        p(k, k) = space.cavity_of(k) % 2 == 0 ? 1.0 : -1.0;
    Observable o;
    o.kind = Kind::expectation;
    o.label = std::move(label);
    o.op = to_sparse(p);
    return o;
}

const std::vector<double>& Trajectory::series(const std::string& label) const {
    if (columns_.empty() && !labels.empty()) {
        columns_.resize(labels.size());
        for (size_t k = 0; k < labels.size(); ++k) {
            columns_[k].reserve(rows.size());
            for (const auto& row : rows) columns_[k].push_back(row[k]);
        }
    }
    for (size_t k = 0; k < labels.size(); ++k)
        if (labels[k] == label) return columns_[k];
    throw InvalidState("no trajectory series labeled '" + label + "'");
}

Trajectory propagate(const LindbladModel& model, const QuantumState& initial,
                     const PropagateOptions& opts, const std::vector<Observable>& observables) {
    if (initial.space != model.space)
        throw SpaceMismatch("initial state and model live on different spaces");
    if (opts.t1 < opts.t0) throw InvalidState("propagate: t1 < t0");
    RhsEngine engine(model);
    if (model.unitary() && !initial.density) {
        auto rhs = [&engine](double t, const Vector& y, Vector& out) { engine.pure(t, y, out); };
        return dispatch<Vector>(model, initial.psi, opts, observables, rhs);
    }
    auto rhs = [&engine](double t, const Matrix& y, Matrix& out) { engine.density(t, y, out); };
    return dispatch<Matrix>(model, initial.density_matrix(), opts, observables, rhs);
}

std::optional<double> time_to_fidelity(const Trajectory& traj, double threshold,
                                       const std::string& label) {
    const std::vector<double>& f = traj.series(label);
    if (f.empty()) return std::nullopt;
    if (f.front() >= threshold) return traj.times.front();
    for (size_t i = 1; i < f.size(); ++i) {
        if (f[i] >= threshold) {
            const double w = (threshold - f[i - 1]) / (f[i] - f[i - 1]);
            return traj.times[i - 1] + w * (traj.times[i] - traj.times[i - 1]);
        }
    }
    return std::nullopt;
}

Matrix lindblad_rhs(const LindbladModel& model, double t, const Matrix& rho) {
    const Matrix h = model.hamiltonian_at(t);
    Matrix out = cd(0.0, -1.0) * (h * rho - rho * h);
    for (const auto& c : model.collapse) out += c.rate * dissipator_apply(Matrix(c.L), rho);
    return out;
}

namespace {
Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}
}  // namespace

Matrix superoperator_dense(const LindbladModel& model, double t) {
    const int n = model.space.dim();
    if (n > 40)
        throw InvalidDimension("superoperator cross-validation path is limited to dim <= 40");
    const Matrix h = model.hamiltonian_at(t);
    const Matrix id = Matrix::Identity(n, n);
    Matrix s = cd(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& c : model.collapse) {
        const Matrix l = Matrix(c.L);
        const Matrix ldl = l.adjoint() * l;
        s += c.rate *
             (kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
    }
    return s;
}

} // namespace cascade

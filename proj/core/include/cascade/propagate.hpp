#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cascade/lindblad.hpp"
#include "cascade/state.hpp"

namespace cascade {

// Real-valued series recorded along a trajectory.  Linear observables take
// Re Tr[op rho]; fidelity and purity get dedicated kinds since one needs the
// target vector and the other is quadratic in rho.
struct Observable {
    enum class Kind { expectation, fidelity, purity };
    Kind kind = Kind::expectation;
    std::string label;
    SparseMatrix op;  // expectation
    Vector target;    // fidelity

    static Observable expectation(std::string label, const OperatorMatrix& full_op);
    static Observable population(std::string label, const QuantumState& basis);
    static Observable fidelity(std::string label, const QuantumState& target_pure);
    static Observable purity(std::string label = "purity");
    // Cavity photon-number parity (valid on full and cavity-only spaces).
    static Observable parity(std::string label, const HilbertSpace& space);
};

struct PropagateOptions {
    double t0 = 0.0;
    double t1 = 0.0;
    double rtol = 1e-8;
    double atol = 1e-10;
    double fixed_dt = 0.0;  // > 0 selects the fixed-step integrator
    double max_dt = 0.0;    // extra step ceiling, 0 = none
    long max_steps = 200000000;
    double sample_interval = 0.0;        // 0 = endpoints only
    std::vector<double> sample_times;    // overrides sample_interval when set
    std::vector<double> snapshot_times;  // merged into the sample grid
    bool check_invariants = true;
    // Evaluated at every sample point after recording; true stops the run.
    std::function<bool(double, const QuantumState&)> stop_when;
};

struct Snapshot {
    double t;
    QuantumState state;
};

// At every stored point: trace within 1 +- 1e-7, purity <= 1 + 1e-7,
// Hermiticity defect < 1e-9 relative (checked unless disabled).
struct Trajectory {
    std::vector<std::string> labels;
    std::vector<double> times;
    std::vector<std::vector<double>> rows;  // rows[i][k]: observable k at times[i]
    std::vector<Snapshot> snapshots;
    QuantumState final_state;
    long n_accepted = 0;
    long n_rejected = 0;
    long n_rhs = 0;
    bool stopped_early = false;

    const std::vector<double>& series(const std::string& label) const;

private:
    mutable std::vector<std::vector<double>> columns_;  // lazy transpose cache
};

// Adaptive embedded Runge-Kutta 5(4) by default; classic fixed-step RK4 when
// opts.fixed_dt > 0 (each sample interval divided exactly).  Step ceiling
// (1/20)(2 pi / nu_max) applies whenever Fourier modes are present.  Pure
// initial states of unitary models propagate as state vectors.
Trajectory propagate(const LindbladModel& model, const QuantumState& initial,
                     const PropagateOptions& opts, const std::vector<Observable>& observables = {});

// First time the labeled series crosses threshold from below, linearly
// interpolated between samples; empty when never crossed.
std::optional<double> time_to_fidelity(const Trajectory& traj, double threshold,
                                       const std::string& label = "fidelity");

// Right-hand side of the master equation at time t (dense, for oracles).
Matrix lindblad_rhs(const LindbladModel& model, double t, const Matrix& rho);

// Dense superoperator acting on column-major vec(rho); cross-validation path
// for small spaces (dim <= 40).
Matrix superoperator_dense(const LindbladModel& model, double t);

} // namespace cascade

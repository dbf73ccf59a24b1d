#include <benchmark/benchmark.h>

#include "cascade/propagate.hpp"
#include "cascade/rates.hpp"
#include "cascade/rwa.hpp"
#include "cascade/state.hpp"
#include "cascade/wigner.hpp"

namespace {

using namespace cascade;

DeviceParams nominal_device() {
    return DeviceParams::from_hz(312.0, 200e6, 0.5e6, 50e6, -153537.6, 2e6, 0.0, 0.0);
}

PumpConfig nominal_pumps() {
    PumpConfig p;
    p.g1 = 898777.0 * two_pi;
    p.g2 = 2e6 * two_pi;
    p.g3 = 460e3 * two_pi;
    return p;
}

void BM_cavity_propagate(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const DeviceParams dev = nominal_device();
    const PumpConfig pumps = nominal_pumps();
    const EffectiveCoeffs co = effective_coefficients(dev, pumps);
    const CavityRates rates = cavity_rates(co, pumps, dev, NoiseSpectrum::white(dev.Gamma_1));
    const LindbladModel model = build_cavity_me(co, rates, dim);
    const QuantumState vac = basis_state(cavity_space(dim), 0, 0);
    PropagateOptions opts;
    opts.t1 = 1e-6;
    opts.rtol = 1e-6;
    for (auto _ : state) {
        Trajectory t = propagate(model, vac, opts);
        benchmark::DoNotOptimize(t.n_rhs);
    }
}
BENCHMARK(BM_cavity_propagate)->Arg(16)->Arg(24)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_full_model_propagate(benchmark::State& state) {
    const DeviceParams dev = nominal_device();
    PumpConfig pumps = nominal_pumps();
    pumps.g3 = 0.0;
    const HilbertSpace space(16, 3);
    const LindbladModel model = make_model(build_hsys_fourier(dev, pumps, space));
    const QuantumState f0 = basis_state(space, 2, 0);
    PropagateOptions opts;
    opts.t1 = 0.1e-6;
    opts.rtol = 1e-8;
    for (auto _ : state) {
        Trajectory t = propagate(model, f0, opts);
        benchmark::DoNotOptimize(t.n_rhs);
    }
}
BENCHMARK(BM_full_model_propagate)->Unit(benchmark::kMillisecond);

void BM_wigner_grid(benchmark::State& state) {
    const int dim = 32;
    const QuantumState cat = cat_state_mod4(cd(2.0, 0.0), dim);
    const Matrix rho = cat.density_matrix();
    const auto grid = wigner_square_grid(3.5, 41);
    for (auto _ : state) {
        WignerResult w = wigner(rho, grid);
        benchmark::DoNotOptimize(w.w.data());
    }
}
BENCHMARK(BM_wigner_grid)->Unit(benchmark::kMillisecond);

void BM_second_order_rwa(benchmark::State& state) {
    const DeviceParams dev = nominal_device();
    const PumpConfig pumps = nominal_pumps();
    const HilbertSpace space(32, 3);
    const FourierHamiltonian fh = build_hsys_fourier(dev, pumps, space);
    for (auto _ : state) {
        RwaResult r = second_order_rwa(fh);
        benchmark::DoNotOptimize(r.max_mode_ratio);
    }
}
BENCHMARK(BM_second_order_rwa)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

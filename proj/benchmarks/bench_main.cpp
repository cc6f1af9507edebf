#include <benchmark/benchmark.h>

#include "photon_shaping/analysis.hpp"
#include "photon_shaping/device.hpp"
#include "photon_shaping/dynamics.hpp"
#include "photon_shaping/mle.hpp"
#include "photon_shaping/tomography.hpp"

using namespace shaping;

static void BM_DressedSpectrum(benchmark::State& state) {
    const auto p = DeviceParams::paper_device();
    const double amp = static_cast<double>(state.range(0)) / 1000.0;
    for (auto _ : state) benchmark::DoNotOptimize(dressed_spectrum(p, amp).coupling);
}
BENCHMARK(BM_DressedSpectrum)->Arg(100)->Arg(700)->Unit(benchmark::kMillisecond);

// Integrator cost per simulated nanosecond, full decoherence.
static void BM_Propagate(benchmark::State& state) {
    const auto p = DeviceParams::paper_device();
    const Envelope env = synthesize_sin2(0.7, 50.0);
    const LindbladModel m = LindbladModel::emission(p, env);
    const Matrix rho0 = initial_density(p, InitialState::f0);
    PropagateOptions opts;
    opts.keep_snapshots = false;
    for (auto _ : state) benchmark::DoNotOptimize(propagate(m, rho0, env.t_end(), opts).record.emitted);
    state.counters["ns_simulated"] = benchmark::Counter(50.0 * static_cast<double>(state.iterations()),
                                                        benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Propagate)->Unit(benchmark::kMillisecond);

static void BM_Symmetry(benchmark::State& state) {
    ModeFunction mode;
    for (int i = 0; i <= 3000; ++i) {
        const double t = 0.1 * i;
        mode.times.push_back(t);
        mode.psi.emplace_back(std::exp(-0.5 * (t - 150.0) * (t - 150.0) / 900.0), 0.0);
    }
    mode = normalize(mode);
    for (auto _ : state) benchmark::DoNotOptimize(symmetry(mode).s);
}
BENCHMARK(BM_Symmetry)->Unit(benchmark::kMillisecond);

static void BM_SimulateShots(benchmark::State& state) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
    rho(0, 0) = 0.2;
    rho(1, 1) = 0.8;
    ShotOptions opts;
    opts.seed = 7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_shots(rho, NoiseModel{}, static_cast<std::uint64_t>(state.range(0)), opts).shots());
    }
}
BENCHMARK(BM_SimulateShots)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_Mle(benchmark::State& state) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    rho(0, 0) = 0.3;
    rho(1, 1) = 0.7;
    const MomentSet m = moments_of_state(rho);
    MomentSet with_errors = m;
    with_errors.error.setConstant(1e-3);
    Eigen::VectorXcd target = Eigen::VectorXcd::Zero(4);
    target(1) = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(mle_density_matrix(with_errors, 3, target).fidelity);
}
BENCHMARK(BM_Mle)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

#include <gtest/gtest.h>

#include <cmath>

#include "photon_shaping/diagnostics.hpp"
#include "photon_shaping/dynamics.hpp"
#include "photon_shaping/errors.hpp"

using namespace shaping;

TEST(Dephasing, ModelRatesFromCoherenceTimes) {
    const DephasingRates r = dephasing_rates(DeviceParams::paper_device());
    EXPECT_NEAR(r.gamma_ge, 1.0 / 1640 - 0.5 / 2000, 1e-15);
    EXPECT_NEAR(r.gamma_f, 1.0 / 580 - 0.5 / 550 - r.gamma_ge, 1e-15);
    EXPECT_NEAR(r.t2_ef_model, 619.4, 0.1);
}

TEST(Dephasing, InconsistentT2IsClampedWithWarning) {
    auto p = DeviceParams::paper_device();
    p.t2_ge = 5000.0;
    WarningCapture w;
    const DephasingRates r = dephasing_rates(p);
    EXPECT_EQ(r.gamma_ge, 0.0);
    EXPECT_TRUE(w.contains("T2_ge"));
}

TEST(Collapse, SelectedChannels) {
    const auto p = DeviceParams::paper_device();
    EXPECT_EQ(collapse_operators(p).size(), 5u);
    EXPECT_EQ(collapse_operators(p, Decoherence::kappa_only()).size(), 1u);
    EXPECT_TRUE(collapse_operators(p, Decoherence::none()).empty());
}

// Undriven single photon leaks out as κ e^{−κt}.
TEST(Propagate, FreeCavityDecay) {
    const auto p = DeviceParams::paper_device();
    const LindbladModel m = LindbladModel::emission(p, square_pulse(0.0, 40.0), Decoherence::kappa_only());
    const Vector g1 = dressed_state(p, 0, 1);
    const Propagation run = propagate(m, Matrix(g1 * g1.adjoint()), 40.0);
    const double k = p.kappa_rate();
    EXPECT_NEAR(run.record.emitted, 1.0 - std::exp(-k * 40.0), 2e-3);
    const auto& rec = run.record;
    for (std::size_t i = 0; i < rec.size(); i += 50) {
        EXPECT_NEAR(rec.power[i], k * std::exp(-k * rec.times[i]), 2e-3 * k);
    }
    EXPECT_LT(rec.max_trace_drift, 1e-9);
}

TEST(Propagate, ExcitationBalanceWithCavityLoss) {
    const auto p = DeviceParams::paper_device();
    const LindbladModel m = LindbladModel::emission(p, synthesize_sin2(0.7, 60.0), Decoherence::kappa_only());
    PropagateOptions o;
    o.keep_snapshots = false;
    const auto rec = propagate(m, initial_density(p, InitialState::f0), 80.0, o).record;
    EXPECT_GT(rec.emitted, 0.05);
    const double balance = rec.excitation_start + rec.drive_work - rec.emitted - rec.excitation_end;
    EXPECT_NEAR(balance, 0.0, 1e-6);
    EXPECT_GT(rec.min_probe_eigenvalue, -1e-6);
}

TEST(Propagate, ClosedSystemKeepsPurity) {
    const auto p = DeviceParams::paper_device();
    const LindbladModel m = LindbladModel::emission(p, synthesize_sin2(0.5, 30.0), Decoherence::none());
    const Propagation run = propagate(m, initial_density(p, InitialState::g0_plus_f0), 30.0);
    const Matrix& r = run.final_state;
    // RK4 is not exactly norm preserving, so purity drifts slightly
    EXPECT_NEAR((r * r).trace().real(), 1.0, 1e-4);
    EXPECT_LT(run.record.max_trace_drift, 1e-9);
    EXPECT_FALSE(run.snapshots.empty());
}

TEST(Propagate, RejectsWrongDimension) {
    const auto p = DeviceParams::paper_device();
    const LindbladModel m = LindbladModel::emission(p, synthesize_sin2(0.5, 10.0));
    EXPECT_THROW(propagate(m, Matrix::Identity(4, 4), 10.0), DimensionMismatch);
    EXPECT_THROW(propagate(m, initial_density(p, InitialState::f0), -1.0), Error);
}

TEST(InitialState, DressedSuperpositionIsHalfF) {
    const auto p = DeviceParams::paper_device();
    const Matrix rho = initial_density(p, InitialState::g0_plus_f0);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    const CompositeBasis b = p.basis();
    EXPECT_NEAR(rho(b.index(2, 0), b.index(2, 0)).real(), 0.5, 0.01);
    EXPECT_NEAR(rho(b.index(0, 0), b.index(0, 0)).real(), 0.5, 0.01);
}

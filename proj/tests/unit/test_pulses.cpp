#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "photon_shaping/errors.hpp"
#include "photon_shaping/pulses.hpp"

using namespace shaping;

TEST(Envelope, Sin2ShapeAndEndpoints) {
    const Envelope e = synthesize_sin2(0.7, 200.0);
    EXPECT_NEAR(e.duration(), 200.0, 1e-9);
    EXPECT_NEAR(std::abs(e.samples().front()), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(e.samples().back()), 0.0, 1e-12);
    EXPECT_NEAR(e.peak_amplitude(), 0.7, 1e-12);
    EXPECT_NEAR(e.at(50.0).real(), 0.35, 1e-9);
    EXPECT_EQ(e.at(-1.0), cplx(0.0));
    EXPECT_EQ(e.at(201.0), cplx(0.0));
}

TEST(Envelope, RejectsBadInput) {
    EXPECT_THROW(synthesize_sin2(1.2, 100.0), EnvelopeError);  // above the AWG ceiling
    EXPECT_THROW(synthesize_sin2(0.5, 0.0), EnvelopeError);
    EXPECT_THROW(Envelope(0.0, 0.0, {cplx(0.1)}), EnvelopeError);
    EXPECT_THROW(Envelope(0.01, 0.0, {cplx(std::nan(""), 0.0)}), EnvelopeError);
}

TEST(StarkMap, ValidatesGrid) {
    EXPECT_THROW(StarkMap({0.0}, {0.0}), CalibrationError);
    EXPECT_THROW(StarkMap({0.1, 0.2}, {0.0, -0.01}), CalibrationError);
    EXPECT_THROW(StarkMap({0.0, 0.2, 0.1}, {0.0, -0.01, -0.02}), CalibrationError);
    const StarkMap m({0.0, 0.5}, {0.0, -0.02});
    EXPECT_THROW(m(0.6), CalibrationError);
}

TEST(StarkMap, InterpolationIsMonotone) {
    const StarkMap m({0.0, 0.2, 0.4, 0.6}, {0.0, -0.008, -0.032, -0.076});
    double prev = 1.0;
    for (int i = 0; i <= 60; ++i) {
        const double v = m(0.01 * i);
        EXPECT_LE(v, prev + 1e-15);
        prev = v;
    }
    EXPECT_NEAR(m(0.4), -0.032, 1e-14);
}

// Constant |Ω| gives a linear phase ramp φ = −2π Δ t.
TEST(Compensation, SquarePulsePhaseRamp) {
    const StarkMap m({0.0, 0.5}, {0.0, -0.01});
    const Envelope sq = square_pulse(0.5, 100.0);
    const Envelope c = compensate_phase(sq, m);
    for (std::size_t i = 0; i < c.size(); i += 997) {
        const double t = sq.time(i);
        const cplx expected = 0.5 * std::exp(cplx(0.0, two_pi * 0.01 * t));
        EXPECT_LT(std::abs(c.samples()[i] - expected), 1e-9);
    }
}

TEST(Compensation, ZeroMapIsIdentity) {
    const Envelope e = synthesize_sin2(0.6, 120.0);
    const Envelope c = compensate_phase(e, StarkMap::zero());
    for (std::size_t i = 0; i < e.size(); ++i) EXPECT_EQ(c.samples()[i], e.samples()[i]);
}

TEST(Train, ReferenceTrainFitsCeiling) {
    const auto peaks = reference_train_peaks();
    EXPECT_EQ(peaks.size(), 6u);
    const Envelope train = build_train(peaks);
    EXPECT_LE(train.peak_amplitude(), default_awg_ceiling);
    for (std::size_t k = 1; k < peaks.size(); ++k) EXPECT_GE(peaks[k].start, peaks[k - 1].start + peaks[k - 1].duration);
}

TEST(Gaussian, AreaAndAnalyticPiPulse) {
    GaussianPulse g;
    g.amplitude = 0.04;
    const double exact_area = 0.04 * g.sigma * std::sqrt(2 * std::numbers::pi) * std::erf(3.0 / std::sqrt(2.0));
    EXPECT_NEAR(g.area(), exact_area, 1e-5);
    const auto rabi = RabiAmplitudes::analytic(DeviceParams::paper_device());
    // ef pulse is weaker by the √2 matrix element
    EXPECT_NEAR(rabi.pi_ge / rabi.pi_ef, std::sqrt(2.0), 1e-9);
}

TEST(Gaussian, InitSequences) {
    RabiAmplitudes r{0.04, 0.028};
    const auto f = build_init_sequence(InitKind::prepare_f, r);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_DOUBLE_EQ(f[0].amplitude, 0.04);
    EXPECT_EQ(f[1].transition, Transition::ef);
    const auto gf = build_init_sequence(InitKind::prepare_g_plus_f, r);
    EXPECT_DOUBLE_EQ(gf[0].amplitude, 0.02);
    EXPECT_DOUBLE_EQ(sequence_duration(gf), 60.0);
}

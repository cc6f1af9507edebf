#include <gtest/gtest.h>

#include <cmath>

#include "photon_shaping/calibration.hpp"
#include "photon_shaping/errors.hpp"

using namespace shaping;

// These run real pulse-level simulations; each takes seconds to tens of seconds.

TEST(Rabi, GePiPulseMatchesQubitEstimate) {
    const auto p = DeviceParams::paper_device();
    const RabiAmplitudes r = calibrate_rabi(p);
    const RabiAmplitudes a = RabiAmplitudes::analytic(p);
    EXPECT_NEAR(r.pi_ge, 0.0400, 5e-4);
    EXPECT_NEAR(r.pi_ge / a.pi_ge, 1.0, 0.05);
    // ef pulse: √2 matrix element, anharmonic corrections of a few percent
    EXPECT_NEAR(r.pi_ef / a.pi_ef, 1.0, 0.05);
}

// oracle: dressed-spectrum f0/g1 resonance at 0.2 GHz, -7.868 MHz
TEST(Stark, ScanRecoversDressedShift) {
    const auto p = DeviceParams::paper_device();
    const StarkCalibration cal = stark_calibration(p, {0.2});
    ASSERT_EQ(cal.scans.size(), 1u);
    EXPECT_NEAR(cal.scans[0].shift * 1e3, -7.868, 0.05);
    EXPECT_NEAR(cal.map(0.2), cal.scans[0].shift, 1e-15);
    EXPECT_EQ(cal.reference_scans.size(), 2u);
}

TEST(Stark, RejectsBadAmplitudeGrid) {
    const auto p = DeviceParams::paper_device();
    EXPECT_THROW(stark_calibration(p, {0.3, 0.2}), ConfigError);
    EXPECT_THROW(stark_calibration(p, {1.5}), ConfigError);
}

// A 1 MHz drive offset moves the photon by slightly less than 1 MHz: the
// dressed transition tracks the drive with a slope below one.
TEST(Frequency, PeakFollowsDriveOffset) {
    const auto p = DeviceParams::paper_device();
    const Envelope pulse = compensate_phase(synthesize_sin2(0.7, 200.0), StarkMap::from_spectrum(p));
    FrequencyOptions o;
    o.offsets = {0.0, 0.001};
    const FrequencyCalibration f = frequency_calibration(p, pulse, o);
    ASSERT_EQ(f.peaks.size(), 2u);
    EXPECT_NEAR((f.peaks[1] - f.peaks[0]) * 1e3, 0.906, 0.15);
    EXPECT_TRUE(f.monotone);
    EXPECT_LT(std::abs(f.correction), 0.0002);
}

TEST(Sweep, RefinementNeverLosesToGrid) {
    const auto p = DeviceParams::paper_device();
    SweepOptions o;
    o.durations = {140.0};
    o.amplitudes = {0.6, 0.8};
    o.refine_rounds = 1;
    o.stark = StarkMap::from_spectrum(p);
    const SweepResult r = sweep_symmetry(p, o);
    ASSERT_EQ(r.grid.size(), 2u);
    for (const auto& g : r.grid) {
        EXPECT_GE(r.best.s, g.s);
        EXPECT_GT(g.efficiency, 0.3);
        EXPECT_LE(g.s, 1.0 + 1e-9);
    }
}

TEST(Sweep, RejectsAmplitudeOutsideMap) {
    SweepOptions o;
    o.durations = {100.0};
    o.amplitudes = {0.5};
    o.stark = StarkMap({0.0, 0.4}, {0.0, -0.03});
    EXPECT_THROW(sweep_symmetry(DeviceParams::paper_device(), o), ConfigError);
}

// Without decoherence nothing excites |g>. With it, bare-basis dephasing
// during the strong transfer drive leaves a small e population.
TEST(Reset, EmptyStateStaysEmpty) {
    ResetOptions o;
    o.rounds = 1;
    o.decoherence = Decoherence::none();
    const ResetResult r = reset_protocol(DeviceParams::paper_device(), 0.0, o);
    EXPECT_EQ(r.p_e_after_round.size(), 1u);
    EXPECT_LT(r.final_p_e, 1e-3);
    EXPECT_LT(r.final_p_f, 1e-3);
    EXPECT_THROW(reset_protocol(DeviceParams::paper_device(), 0.7, o), Error);
}

#include <gtest/gtest.h>

#include <string>

#include "photon_shaping/config.hpp"
#include "photon_shaping/errors.hpp"

using namespace shaping;

namespace {

const std::string minimal = R"(
device:
  omega_q: 8.640
  omega_r: 7.224
  g: 0.035
  alpha: -0.421
  kappa: 0.024
  t1_e: 2000
  t1_f: 550
  t2_ge: 1640
  t2_gf: 580
)";

std::string error_field(const std::string& yaml) {
    try {
        parse_config_string(yaml);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<none>";
}

}  // namespace

TEST(Config, ShippedDeviceFileMatchesDefaults) {
    const ScenarioConfig c = parse_config(PHOTON_SHAPING_SOURCE_DIR "/configs/paper_device.yaml");
    const DeviceParams p = DeviceParams::paper_device();
    EXPECT_NEAR(c.device.omega_q, p.omega_q, 1e-12);
    EXPECT_NEAR(c.device.g, p.g, 1e-12);
    EXPECT_NEAR(c.device.alpha, p.alpha, 1e-12);
    EXPECT_NEAR(c.device.kappa, p.kappa, 1e-12);
    EXPECT_NEAR(c.device.t1_e, p.t1_e, 1e-9);
    EXPECT_NEAR(c.device.t2_ge, p.t2_ge, 1e-9);
    EXPECT_NEAR(c.simulation.dt, 0.005, 1e-15);
    EXPECT_EQ(c.seed, 20140901u);
    EXPECT_EQ(c.pulse.initial, InitialState::g0_plus_f0);
    EXPECT_NEAR(c.pulse.amplitude, 0.7, 1e-12);
}

TEST(Config, MinimalFileUsesDefaults) {
    const ScenarioConfig c = parse_config_string(minimal);
    EXPECT_EQ(c.device, DeviceParams::paper_device());
    EXPECT_EQ(c.threads, 1);
}

TEST(Config, MissingRequiredFieldIsNamed) {
    std::string y = minimal;
    y.erase(y.find("  kappa: 0.024\n"), 15);
    EXPECT_EQ(error_field(y), "device.kappa");
}

TEST(Config, UnknownKeyIsNamed) {
    EXPECT_EQ(error_field(minimal + "  kapa: 0.02\n"), "device.kapa");
    EXPECT_EQ(error_field(minimal + "pulse:\n  amplitud: 0.5\n"), "pulse.amplitud");
    EXPECT_EQ(error_field(minimal + "bogus: 1\n"), "bogus");
}

TEST(Config, InvariantViolationIsNamed) {
    std::string y = minimal;
    y.replace(y.find("t1_e: 2000"), 10, "t1_e: -5");
    EXPECT_EQ(error_field(y), "device.t1_e");
}

TEST(Config, UnitsAreConvertedAndChecked) {
    EXPECT_NEAR(parse_frequency("24 MHz", "f"), 0.024, 1e-15);
    EXPECT_NEAR(parse_frequency("7.224", "f"), 7.224, 1e-15);
    EXPECT_NEAR(parse_time("2 us", "t"), 2000.0, 1e-12);
    EXPECT_NEAR(parse_time("5 ps", "t"), 0.005, 1e-15);
    try {
        parse_time("3 MHz", "device.t1_e");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "device.t1_e");
        EXPECT_NE(std::string(e.what()).find("unit violation"), std::string::npos);
    }
    std::string y = minimal;
    y.replace(y.find("kappa: 0.024"), 12, "kappa: 24 ns");
    EXPECT_EQ(error_field(y), "device.kappa");
}

TEST(Config, EchoRoundTrips) {
    ScenarioConfig c = parse_config(PHOTON_SHAPING_SOURCE_DIR "/configs/paper_device.yaml");
    c.sweep.durations = {100.0, 140.0};
    c.pulse.drive_offset = -6.2e-5;
    const ScenarioConfig back = parse_config_string(echo_config(c));
    EXPECT_EQ(back, c);
    EXPECT_EQ(echo_config(back), echo_config(c));
}

TEST(Config, RejectsMalformedYaml) {
    EXPECT_THROW(parse_config_string("device: [1, 2"), ConfigError);
    EXPECT_THROW(parse_config_string("- 1\n- 2\n"), ConfigError);
    EXPECT_EQ(error_field(minimal + "threads: 0\n"), "threads");
}

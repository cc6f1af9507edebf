#pragma once

// Run configuration (YAML). Frequencies are GHz and times ns unless a value
// carries a unit string such as "24 MHz" or "2 us". Unknown keys are errors.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "photon_shaping/device.hpp"
#include "photon_shaping/dynamics.hpp"

namespace shaping {

struct SimulationConfig {
    double dt = 0.005;        ///< ns
    double stride = 0.1;      ///< ns
    double tail_kappa = 8.0;
    Decoherence decoherence;

    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

struct PulseConfig {
    double amplitude = 0.7;    ///< GHz
    double duration = 200.0;   ///< ns
    bool compensate = true;
    double drive_offset = 0.0; ///< GHz
    InitialState initial = InitialState::f0;
    std::string envelope_csv;  ///< overrides amplitude/duration when set

    friend bool operator==(const PulseConfig&, const PulseConfig&) = default;
};

struct SweepConfig {
    std::vector<double> durations;   ///< empty: 60..500 step 40
    std::vector<double> amplitudes;  ///< empty: 0.1..1.0 step 0.1
    int refine_rounds = 3;
    double min_efficiency = 0.5;

    friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct StarkConfig {
    std::vector<double> amplitudes{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    std::vector<double> reference_amplitudes{0.04, 0.08};
    double pulse_length = 100.0;
    double rise = 5.0;

    friend bool operator==(const StarkConfig&, const StarkConfig&) = default;
};

struct FrequencyConfig {
    std::vector<double> offsets{-0.002, -0.001, 0.0, 0.001, 0.002};

    friend bool operator==(const FrequencyConfig&, const FrequencyConfig&) = default;
};

struct ResetConfig {
    double thermal_p_e = 0.13;
    int rounds = 3;
    double transfer_amplitude = 0.7;
    double transfer_duration = 200.0;
    double wait_kappa = 6.0;

    friend bool operator==(const ResetConfig&, const ResetConfig&) = default;
};

struct TomographyConfig {
    std::uint64_t shots = 1000000;
    double noise_number = 10.0;
    int n_max = 3;
    int max_order = 4;
    /// Photon pulse whose state is measured; superposition runs use the same pulse.
    double amplitude = 0.6;
    double duration = 500.0;

    friend bool operator==(const TomographyConfig&, const TomographyConfig&) = default;
};

struct ScenarioConfig {
    DeviceParams device;
    std::string scenario;
    std::uint64_t seed = 20140901;
    int threads = 1;
    std::string output;
    SimulationConfig simulation;
    PulseConfig pulse;
    SweepConfig sweep;
    StarkConfig stark;
    FrequencyConfig frequency;
    ResetConfig reset;
    TomographyConfig tomography;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;

    EmissionOptions emission_options() const;
    PropagateOptions propagate_options() const;
};

ScenarioConfig parse_config(const std::filesystem::path& path);
/// `source` names the text in error messages.
ScenarioConfig parse_config_string(const std::string& yaml, const std::string& source = "<string>");

/// Fully resolved config as YAML in base units; re-parses to an equal config.
std::string echo_config(const ScenarioConfig& config);

/// "24 MHz" → 0.024; plain numbers are GHz.
double parse_frequency(const std::string& text, const std::string& field);
/// "2 us" → 2000; plain numbers are ns.
double parse_time(const std::string& text, const std::string& field);

}  // namespace shaping

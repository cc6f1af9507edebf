#pragma once

// Closed-loop calibration experiments run against the simulator: symmetry
// sweeps, Stark-shift and drive-frequency calibration, Rabi calibration of the
// preparation pulses, and the thermal-population reset.

#include <optional>
#include <vector>

#include "photon_shaping/analysis.hpp"
#include "photon_shaping/dynamics.hpp"
#include "photon_shaping/pulses.hpp"

namespace shaping {

struct SweepPoint {
    double duration = 0.0;   ///< T (ns)
    double amplitude = 0.0;  ///< Ω0 (GHz)
    double s = 0.0;
    double efficiency = 0.0;  ///< ∫power / initial f population
    double residual_f0 = 0.0;
};

struct SweepOptions {
    std::vector<double> durations;   ///< default 60..500 step 40
    std::vector<double> amplitudes;  ///< default 0.1..1.0 step 0.1
    int refine_rounds = 3;
    /// Weak drives give symmetric but faint photons; cells emitting less than
    /// this fraction of the initial f population cannot be the optimum.
    double min_efficiency = 0.5;
    int threads = 1;
    EmissionOptions emission;
    std::optional<StarkMap> stark;   ///< default: StarkMap::from_spectrum
};

struct SweepResult {
    std::vector<double> durations;
    std::vector<double> amplitudes;
    std::vector<SweepPoint> grid;         ///< row-major: durations × amplitudes
    std::vector<SweepPoint> refinements;  ///< every point evaluated while refining
    SweepPoint best;

    const SweepPoint& at(std::size_t duration_index, std::size_t amplitude_index) const;
};

/// One cell: compensated sin² pulse, superposition protocol, symmetry of the mean field.
SweepPoint evaluate_symmetry_point(const DeviceParams& params, double duration, double amplitude,
                                   const StarkMap& stark, const EmissionOptions& emission = {});

SweepResult sweep_symmetry(const DeviceParams& params, const SweepOptions& options = {});

/// Amplitude maximizing s at a fixed pulse length (golden section on [lo, hi]).
SweepPoint calibrate_amplitude(const DeviceParams& params, double duration, const StarkMap& stark, double lo,
                               double hi, double tol = 0.005, const EmissionOptions& emission = {});

struct StarkScan {
    double amplitude = 0.0;
    double resonance = 0.0;           ///< detuning of the P(f) minimum (GHz)
    double shift = 0.0;               ///< resonance minus the zero-amplitude reference (GHz)
    std::vector<double> detunings;    ///< GHz, relative to the reference drive frequency
    std::vector<double> p_f;          ///< final transmon f population
};

struct StarkOptions {
    double pulse_length = 100.0;  ///< ns, including the edges
    double rise = 5.0;            ///< cos² edge length (ns); 0 gives a hard square pulse
    int coarse_points = 21;
    int fine_points = 9;
    int fit_points = 5;
    /// Two low amplitudes whose resonances are extrapolated (δ0 + c·Ω²) to the
    /// zero-amplitude reference. With κ on, the P(f) minimum sits slightly off
    /// the Hermitian resonance by an amplitude-independent amount.
    std::vector<double> reference_amplitudes{0.04, 0.08};
    Decoherence decoherence;
    PropagateOptions propagate;
    int threads = 1;
};

/// Flat-top pulse at detuning δ applied to |f0⟩; the resonance is the δ
/// minimizing the final f population (parabolic fit). shift == resonance here.
StarkScan measure_stark_shift(const DeviceParams& params, double amplitude, const StarkOptions& options = {});

struct StarkCalibration {
    StarkMap map;
    std::vector<StarkScan> scans;
    std::vector<StarkScan> reference_scans;
    double zero_offset = 0.0;  ///< extrapolated zero-amplitude resonance (GHz)
};

/// Scans every amplitude in the grid (0 is implied) and assembles a StarkMap.
StarkCalibration stark_calibration(const DeviceParams& params, const std::vector<double>& amplitudes,
                                   const StarkOptions& options = {});

struct FrequencyCalibration {
    std::vector<double> offsets;     ///< GHz
    std::vector<double> peaks;       ///< photon spectral peak (GHz)
    std::vector<double> symmetries;
    double correction = 0.0;         ///< drive offset putting the photon peak at zero (GHz)
    bool monotone = true;
};

struct FrequencyOptions {
    std::vector<double> offsets{-0.002, -0.001, 0.0, 0.001, 0.002};
    InitialState initial = InitialState::g0_plus_f0;
    EmissionOptions emission;
    int threads = 1;
};

FrequencyCalibration frequency_calibration(const DeviceParams& params, const Envelope& pulse,
                                           const FrequencyOptions& options = {});

/// Alternative: the drive offset maximizing the symmetry s (golden section over the offset range).
double frequency_calibration_symmetry(const DeviceParams& params, const Envelope& pulse,
                                      const FrequencyOptions& options = {}, double tol = 1e-5);

/// Transmon-only copy of params (single resonator level).
DeviceParams transmon_only(const DeviceParams& params);

/// Run Gaussian pulses back to back in the frame `frame_ghz`, each at its
/// dressed transition frequency. Returns the final state.
Matrix run_gaussian_sequence(const DeviceParams& params, const std::vector<GaussianPulse>& pulses, const Matrix& rho0,
                             double frame_ghz, const Decoherence& decoherence, double t_start = 0.0,
                             const PropagateOptions& options = {});

/// π amplitudes from simulated Rabi scans on the transmon-only model, decoherence off.
RabiAmplitudes calibrate_rabi(const DeviceParams& params, double sigma = 5.0, double length = 30.0);

struct ResetOptions {
    int rounds = 3;
    double transfer_amplitude = 0.7;  ///< GHz
    double transfer_duration = 200.0; ///< ns
    double wait_kappa = 6.0;          ///< wait after each transfer, units of 1/κ
    Decoherence decoherence;
    PropagateOptions propagate;
    std::optional<RabiAmplitudes> rabi;
    std::optional<StarkMap> stark;
};

struct ResetResult {
    double initial_p_e = 0.0;
    std::vector<double> p_e_after_round;
    double final_p_e = 0.0;
    double final_p_f = 0.0;
    double duration = 0.0;  ///< ns
};

/// Rounds of π(e→f), compensated f0→g1 transfer and a cavity wait, from a thermal transmon state.
ResetResult reset_protocol(const DeviceParams& params, double thermal_p_e, const ResetOptions& options = {});

}  // namespace shaping

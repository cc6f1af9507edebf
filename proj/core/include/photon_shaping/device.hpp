#pragma once

// Driven transmon-resonator model in the frame rotating at the drive.
//
// Frequencies in DeviceParams and in every public signature here are ordinary
// frequencies in GHz (ω/2π). Operators returned by the Hamiltonian builders
// are angular, in rad/ns.
//
// Drive convention: the complex drive strength Ω = Ω₀ e^{iφ} corresponds to a
// lab-frame signal Ω₀ cos(ω_d t − φ), so a phase ramp φ̇ = −ε is the same as
// a drive at ω_d + ε.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "photon_shaping/quantum.hpp"

namespace shaping {

enum class TransmonModel { kerr, charge };

struct DeviceParams {
    double omega_q = 8.640;   ///< g→e transition (GHz)
    double omega_r = 7.224;   ///< resonator (GHz)
    double g = 0.035;         ///< Jaynes-Cummings coupling (GHz)
    double alpha = -0.421;    ///< anharmonicity (GHz)
    double kappa = 0.024;     ///< resonator linewidth κ/2π (GHz)
    double t1_e = 2000.0;     ///< ns
    double t1_f = 550.0;      ///< ns
    double t2_ge = 1640.0;    ///< ns
    double t2_ef = 557.0;     ///< ns, diagnostic only
    double t2_gf = 580.0;     ///< ns
    int n_transmon = 6;
    int n_resonator = 3;
    TransmonModel model = TransmonModel::kerr;
    std::optional<double> e_c;  ///< charging energy (GHz), charge model only
    std::optional<double> e_j;  ///< Josephson energy (GHz); tuned to omega_q when absent
    double n_g = 0.0;           ///< offset charge, charge model only

    /// Device of the reference experiment.
    static DeviceParams paper_device() { return {}; }

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;

    CompositeBasis basis() const { return {n_transmon, n_resonator}; }
    double kappa_rate() const;  ///< κ in ns⁻¹ (angular)

    friend bool operator==(const DeviceParams&, const DeviceParams&) = default;
};

/// Transmon level energies (relative to |g⟩, GHz) and ladder matrix
/// elements ⟨k−1|b|k⟩ for the selected model.
struct TransmonLevels {
    std::vector<double> energies;
    std::vector<double> ladder;  ///< ladder[k-1] = ⟨k−1|b|k⟩, k = 1..n−1
    double omega_ge() const { return energies.at(1); }
    double anharmonicity() const { return energies.at(2) - 2.0 * energies.at(1); }
};

TransmonLevels transmon_levels(const DeviceParams& params);

/// ω_d = 2ω_q + α − ω_r (GHz), using the model's ω_q and α.
double drive_frequency(const DeviceParams& params);

struct FrameDetunings {
    double delta_q;  ///< ω_q − ω_frame
    double delta_r;  ///< ω_r − ω_frame
};
FrameDetunings frame_detunings(const DeviceParams& params, double drive_offset = 0.0);

/// Time-independent part and drive coupling of the rotating-frame Hamiltonian:
/// H(t) = static_part + (Ω*(t) b + Ω(t) b†)/2 with b = lowering (both rad/ns
/// once multiplied by 2π Ω, see build_hamiltonian).
struct HamiltonianParts {
    Operator static_part;  ///< rad/ns
    Operator lowering;     ///< transmon b with the model's matrix elements
};
HamiltonianParts hamiltonian_parts(const DeviceParams& params, double frame_ghz);

/// H in the frame rotating at frame_ghz with constant drive Ω (GHz), rad/ns.
Operator hamiltonian_in_frame(const DeviceParams& params, double frame_ghz, cplx omega);

/// H in the frame rotating at ω_d + drive_offset, rad/ns.
Operator build_hamiltonian(const DeviceParams& params, cplx omega, double drive_offset = 0.0);

/// Second-order f0↔g1 coupling g̃ = g α Ω / (√2 Δ (Δ + α)), GHz.
cplx effective_coupling_perturbative(const DeviceParams& params, cplx omega);

/// Leading-order (Ω²) drive-induced shift of the f0↔g1 transition, GHz.
/// Used to place calibration scan windows.
double stark_shift_perturbative(const DeviceParams& params, double amplitude);

/// Labelled dressed level in the frame of the reference drive frequency.
struct DressedLevel {
    int transmon = 0;
    int photons = 0;
    double energy = 0.0;  ///< GHz
};

struct DressedSpectrum {
    double amplitude = 0.0;           ///< Ω/2π (GHz)
    std::vector<DressedLevel> levels; ///< frame of ω_d + zero_amplitude_offset
    double resonance_offset = 0.0;    ///< drive offset from ω_d making f0/g1 resonant (GHz)
    double zero_amplitude_offset = 0.0;
    double stark_shift = 0.0;         ///< Δ_f0g1 = resonance_offset − zero_amplitude_offset
    cplx coupling;                    ///< exact g̃ at resonance (GHz)

    double coupling_magnitude() const { return std::abs(coupling); }
    const DressedLevel& level(int transmon, int photons) const;
};

struct SpectrumOptions {
    double step = 0.010;    ///< amplitude step for adiabatic continuation (GHz)
    int max_halvings = 6;
    double overlap_threshold = 0.5;
};

/// Effective 2×2 Hamiltonian (GHz) on the dressed f0/g1 pair at constant
/// drive Ω and drive offset; rows/cols ordered (f0, g1).
Eigen::Matrix2cd f0g1_block(const DeviceParams& params, cplx omega, double drive_offset,
                            const SpectrumOptions& options = {});

/// Point on the f0↔g1 resonance curve.
struct ResonancePoint {
    double amplitude = 0.0;  ///< GHz
    double offset = 0.0;     ///< drive offset from ω_d at resonance (GHz)
    cplx coupling;           ///< g̃ at resonance (GHz)
};

/// Continuation of the f0/g1 resonance along increasing amplitudes. The
/// returned vector always starts with amplitude 0.
std::vector<ResonancePoint> resonance_curve(const DeviceParams& params,
                                            const std::vector<double>& amplitudes,
                                            const SpectrumOptions& options = {});

DressedSpectrum dressed_spectrum(const DeviceParams& params, double amplitude,
                                 const SpectrumOptions& options = {});

/// Dressed f0↔g1 transition offset from ω_d at zero amplitude (GHz); this
/// holds the static dispersive shifts the bare formula for ω_d leaves out.
double zero_amplitude_offset(const DeviceParams& params);

/// Lab frequency of the dressed |g1⟩→|g0⟩ transition (GHz).
double dressed_resonator_frequency(const DeviceParams& params);

/// Lab frequency of the dressed |k,0⟩→|k+1,0⟩ transmon transition (GHz).
double dressed_transmon_transition(const DeviceParams& params, int lower_level);

/// Dressed eigenvector (undriven) adiabatically connected to |transmon, photons⟩.
Vector dressed_state(const DeviceParams& params, int transmon, int photons);

std::string to_string(TransmonModel model);

}  // namespace shaping

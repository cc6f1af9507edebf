#pragma once

// Lindblad master-equation integration (fixed-step RK4) and the output field
// a_out = √κ a.

#include <string>
#include <vector>

#include "photon_shaping/device.hpp"
#include "photon_shaping/pulses.hpp"
#include "photon_shaping/quantum.hpp"

namespace shaping {

struct Decoherence {
    bool resonator_decay = true;
    bool relaxation = true;
    bool dephasing = true;

    static Decoherence none() { return {false, false, false}; }
    static Decoherence kappa_only() { return {true, false, false}; }

    friend bool operator==(const Decoherence&, const Decoherence&) = default;
};

/// Jump operator √rate · op.
struct CollapseOperator {
    std::string name;
    Operator op;
    double rate = 0.0;  ///< ns⁻¹
};

/// Pure-dephasing rates of the two diagonal dephasing operators.
///   c1 = Σ_{k≥1} |k⟩⟨k|  at 2·gamma_ge   (g–e coherence decays at gamma_ge)
///   c2 = Σ_{k≥2} |k⟩⟨k|  at 2·gamma_f    (g–f coherence decays at gamma_ge + gamma_f)
struct DephasingRates {
    double gamma_ge = 0.0;  ///< ns⁻¹
    double gamma_f = 0.0;   ///< ns⁻¹
    double t2_ef_model = 0.0;  ///< resulting e–f coherence time (ns), for comparison with the measured value
};
DephasingRates dephasing_rates(const DeviceParams& params);

std::vector<CollapseOperator> collapse_operators(const DeviceParams& params,
                                                 const Decoherence& decoherence = {});

struct LindbladModel {
    DeviceParams params;
    Envelope envelope;
    double frame_ghz = 0.0;         ///< rotating frame of the integration
    double carrier_offset = 0.0;    ///< drive frequency minus frame (GHz)
    double output_frame_ghz = 0.0;  ///< frame in which ⟨a_out⟩ is reported
    Decoherence decoherence;

    /// Frame at the dressed f0↔g1 reference drive frequency, output at the
    /// dressed resonator frequency, drive detuned by drive_offset.
    static LindbladModel emission(const DeviceParams& params, Envelope envelope,
                                  const Decoherence& decoherence = {}, double drive_offset = 0.0);
};

struct PropagateOptions {
    double dt = 0.005;          ///< ns
    double stride = 0.1;        ///< output stride (ns)
    int positivity_probes = 10;
    bool keep_snapshots = true;  ///< store ρ at the probe times
    double trace_tol = 1e-7;
    double positivity_tol = 1e-6;
};

struct OutputRecord {
    std::vector<double> times;   ///< ns
    std::vector<cplx> a_out;     ///< √κ⟨a⟩ in the output frame (ns^-1/2)
    std::vector<double> power;   ///< κ⟨a†a⟩ (ns⁻¹)
    Eigen::MatrixXd populations; ///< rows: times, cols: flat basis index
    CompositeBasis basis;

    double emitted = 0.0;        ///< ∫ power dt
    double drive_work = 0.0;     ///< excitations injected by the drive, ∫ −2π Im(Ω*⟨b⟩) dt
    double excitation_start = 0.0;  ///< ⟨b†b + a†a⟩ at the first time
    double excitation_end = 0.0;
    double max_trace_drift = 0.0;
    double min_probe_eigenvalue = 0.0;

    std::size_t size() const { return times.size(); }
    std::vector<double> population(int transmon, int photons) const;
    std::vector<double> transmon_population(int level) const;
    double final_population(int transmon, int photons) const;
    double final_transmon_population(int level) const;
    double residual_f0() const { return final_population(2, 0); }
};

struct Snapshot {
    double time = 0.0;
    Matrix rho;
};

struct Propagation {
    Matrix final_state;
    OutputRecord record;
    std::vector<Snapshot> snapshots;
};

/// Integrate from envelope.t0() (or t_start when given) to t_end.
Propagation propagate(const LindbladModel& model, const Matrix& rho0, double t_end,
                      const PropagateOptions& options = {});
Propagation propagate(const LindbladModel& model, const State& rho0, double t_end,
                      const PropagateOptions& options = {});
Propagation propagate(const LindbladModel& model, const Matrix& rho0, double t_start, double t_end,
                      const PropagateOptions& options);

enum class InitialState { f0, g0_plus_f0 };

/// Dressed |f0⟩ or (|g0⟩ + |f0⟩)/√2 of the undriven system.
Matrix initial_density(const DeviceParams& params, InitialState initial);

struct EmissionOptions {
    Decoherence decoherence;
    PropagateOptions propagate;
    double drive_offset = 0.0;  ///< GHz, relative to the reference drive frequency
    double tail_kappa = 8.0;    ///< extra time after the pulse, in units of 1/κ
};

/// Propagate the requested initial state through envelope + tail.
OutputRecord emit_photon(const DeviceParams& params, const Envelope& envelope, InitialState initial,
                         const EmissionOptions& options = {});

/// Reference drive frequency: ω_d plus the dressed zero-amplitude offset (GHz).
double reference_drive_frequency(const DeviceParams& params);

}  // namespace shaping

#pragma once

// Drive envelopes: sin² shaping pulses, square and Gaussian pulses, trains,
// and Stark-shift phase compensation. Amplitudes are Ω/2π in GHz.

#include <memory>
#include <vector>

#include "photon_shaping/device.hpp"
#include "photon_shaping/units.hpp"

namespace shaping {

inline constexpr double default_awg_ceiling = 1.0;  // GHz
inline constexpr double default_envelope_dt = 0.01;  // ns

/// Uniformly sampled complex drive Ω(t); sample i sits at t0 + i·dt.
class Envelope {
public:
    Envelope() = default;
    Envelope(double dt, double t0, std::vector<cplx> samples, double ceiling = default_awg_ceiling);

    double dt() const { return dt_; }
    double t0() const { return t0_; }
    double t_end() const { return t0_ + dt_ * static_cast<double>(samples_.empty() ? 0 : samples_.size() - 1); }
    double duration() const { return t_end() - t0_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    double time(std::size_t i) const { return t0_ + dt_ * static_cast<double>(i); }
    const std::vector<cplx>& samples() const { return samples_; }

    /// Linear interpolation; zero outside [t0, t_end].
    cplx at(double t) const;
    double peak_amplitude() const;

    /// Multiply every sample by e^{iθ}.
    Envelope rotated(double theta) const;
    /// Same samples starting at t0 + shift.
    Envelope shifted(double shift) const;

private:
    double dt_ = default_envelope_dt;
    double t0_ = 0.0;
    std::vector<cplx> samples_;
};

/// Ω0 sin²(π t/T) on [0, T].
Envelope synthesize_sin2(double omega0, double duration, double dt = default_envelope_dt, double t0 = 0.0);

/// Constant Ω on [0, T].
Envelope square_pulse(cplx omega, double duration, double dt = default_envelope_dt, double t0 = 0.0);

/// Amplitude → Stark shift Δ_f0g1 (GHz), monotone cubic (PCHIP) interpolation.
class StarkMap {
public:
    StarkMap() = default;
    /// amplitudes must start at 0, be strictly increasing; shifts[0] must be 0.
    StarkMap(std::vector<double> amplitudes, std::vector<double> shifts);

    /// Zero shift over [0, max_amplitude].
    static StarkMap zero(double max_amplitude = default_awg_ceiling);
    /// Shifts from the dressed spectrum of params on a uniform grid.
    static StarkMap from_spectrum(const DeviceParams& params, double max_amplitude = default_awg_ceiling,
                                  int points = 41);

    double operator()(double amplitude) const;
    double max_amplitude() const { return amplitudes_.empty() ? 0.0 : amplitudes_.back(); }
    const std::vector<double>& amplitudes() const { return amplitudes_; }
    const std::vector<double>& shifts() const { return shifts_; }

private:
    struct Interp;
    std::vector<double> amplitudes_;
    std::vector<double> shifts_;
    std::shared_ptr<const Interp> interp_;
};

/// Apply φ(t) = −2π ∫ Δ_f0g1(|Ω|) dt (trapezoidal in the sample grid).
Envelope compensate_phase(const Envelope& env, const StarkMap& stark);

struct TrainPeak {
    double omega0 = 0.0;       ///< GHz
    double duration = 0.0;     ///< ns
    double start = 0.0;        ///< ns
    double phase_offset = 0.0; ///< rad
};

/// Sum of sin² peaks on one grid starting at t = 0; compensated with `stark` when given.
Envelope build_train(const std::vector<TrainPeak>& peaks, double dt = default_envelope_dt,
                     const StarkMap* stark = nullptr);

/// The six-peak train of the reference experiment.
std::vector<TrainPeak> reference_train_peaks();

enum class Transition { ge, ef };

struct GaussianPulse {
    Transition transition = Transition::ge;
    double amplitude = 0.0;  ///< peak Ω/2π (GHz)
    double sigma = 5.0;      ///< ns
    double length = 30.0;    ///< ns, 6σ
    double phase = 0.0;      ///< rad

    Envelope envelope(double dt = default_envelope_dt, double t0 = 0.0) const;
    /// ∫ |Ω| dt in GHz·ns.
    double area() const;
};

/// π-pulse peak amplitudes for the two transitions (GHz).
struct RabiAmplitudes {
    double pi_ge = 0.0;
    double pi_ef = 0.0;
    /// Ideal-qubit estimate: rotation angle 2π·⟨k−1|b|k⟩·area = π.
    static RabiAmplitudes analytic(const DeviceParams& params, double sigma = 5.0, double length = 30.0);
};

enum class InitKind { prepare_f, prepare_g_plus_f };

/// prepare_f: π(ge), π(ef). prepare_g_plus_f: π/2(ge), π(ef).
std::vector<GaussianPulse> build_init_sequence(InitKind kind, const RabiAmplitudes& rabi);

double sequence_duration(const std::vector<GaussianPulse>& pulses);

}  // namespace shaping

#include "photon_shaping/pulses.hpp"

#include <algorithm>
#include <cmath>

// Boost 1.74 pchip.hpp calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include <numbers>
#include <sstream>

#include "photon_shaping/errors.hpp"

namespace shaping {

Envelope::Envelope(double dt, double t0, std::vector<cplx> samples, double ceiling)
    : dt_(dt), t0_(t0), samples_(std::move(samples)) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw EnvelopeError("envelope dt must be positive");
    if (!std::isfinite(t0)) throw EnvelopeError("envelope t0 must be finite");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const cplx s = samples_[i];
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
            throw EnvelopeError("non-finite envelope sample at index " + std::to_string(i));
        }
        if (std::abs(s) > ceiling * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "envelope amplitude " << std::abs(s) << " GHz at t = " << time(i)
               << " ns exceeds the AWG ceiling of " << ceiling << " GHz";
            throw EnvelopeError(os.str());
        }
    }
}

cplx Envelope::at(double t) const {
    if (samples_.empty()) return 0.0;
    const double x = (t - t0_) / dt_;
    if (x < 0.0 || x > static_cast<double>(samples_.size() - 1)) return 0.0;
    const auto i = static_cast<std::size_t>(x);
    if (i + 1 >= samples_.size()) return samples_.back();
    const double w = x - static_cast<double>(i);
    return (1.0 - w) * samples_[i] + w * samples_[i + 1];
}

double Envelope::peak_amplitude() const {
    double peak = 0.0;
    for (const cplx& s : samples_) peak = std::max(peak, std::abs(s));
    return peak;
}

Envelope Envelope::rotated(double theta) const {
    Envelope out = *this;
    const cplx r = std::polar(1.0, theta);
    for (cplx& s : out.samples_) s *= r;
    return out;
}

Envelope Envelope::shifted(double shift) const {
    Envelope out = *this;
    out.t0_ += shift;
    return out;
}

namespace {

double sin2_value(double omega0, double duration, double u) {
    if (u <= 0.0 || u >= duration) return 0.0;
    const double s = std::sin(std::numbers::pi * u / duration);
    return omega0 * s * s;
}

std::size_t sample_count(double duration, double dt) {
    if (!(duration > 0.0)) throw EnvelopeError("pulse duration must be positive");
    if (!(dt > 0.0)) throw EnvelopeError("envelope dt must be positive");
    return static_cast<std::size_t>(std::llround(duration / dt)) + 1;
}

}  // namespace

Envelope synthesize_sin2(double omega0, double duration, double dt, double t0) {
    if (omega0 < 0.0) throw EnvelopeError("sin² amplitude must be non-negative");
    const std::size_t n = sample_count(duration, dt);
    std::vector<cplx> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = sin2_value(omega0, duration, static_cast<double>(i) * dt);
    return {dt, t0, std::move(s)};
}

Envelope square_pulse(cplx omega, double duration, double dt, double t0) {
    return {dt, t0, std::vector<cplx>(sample_count(duration, dt), omega)};
}

struct StarkMap::Interp {
    std::unique_ptr<boost::math::interpolators::pchip<std::vector<double>>> pchip;
};

StarkMap::StarkMap(std::vector<double> amplitudes, std::vector<double> shifts)
    : amplitudes_(std::move(amplitudes)), shifts_(std::move(shifts)) {
    if (amplitudes_.size() != shifts_.size() || amplitudes_.size() < 2) {
        throw CalibrationError("StarkMap needs at least two (amplitude, shift) pairs");
    }
    if (amplitudes_.front() != 0.0 || shifts_.front() != 0.0) {
        throw CalibrationError("StarkMap must start at amplitude 0 with zero shift");
    }
    for (std::size_t i = 1; i < amplitudes_.size(); ++i) {
        if (!(amplitudes_[i] > amplitudes_[i - 1])) {
            throw CalibrationError("StarkMap amplitude grid must be strictly increasing");
        }
    }
    if (amplitudes_.size() >= 4) {
        auto interp = std::make_shared<Interp>();
        interp->pchip = std::make_unique<boost::math::interpolators::pchip<std::vector<double>>>(
            std::vector<double>(amplitudes_), std::vector<double>(shifts_));
        interp_ = std::move(interp);
    }
}

StarkMap StarkMap::zero(double max_amplitude) { return {{0.0, max_amplitude}, {0.0, 0.0}}; }

StarkMap StarkMap::from_spectrum(const DeviceParams& params, double max_amplitude, int points) {
    if (points < 2) throw CalibrationError("StarkMap needs at least two grid points");
    std::vector<double> amps(points);
    for (int i = 0; i < points; ++i) amps[i] = max_amplitude * i / (points - 1);
    const auto curve = resonance_curve(params, amps);
    // curve[0] is the implicit zero-amplitude point; curve[1..] follow amps[1..].
    std::vector<double> shifts(points, 0.0);
    for (int i = 1; i < points; ++i) shifts[i] = curve[i].offset - curve[0].offset;
    return {std::move(amps), std::move(shifts)};
}

double StarkMap::operator()(double amplitude) const {
    if (amplitudes_.empty()) throw CalibrationError("empty StarkMap");
    if (amplitude < 0.0 || amplitude > amplitudes_.back() * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "amplitude " << amplitude << " GHz outside the StarkMap range [0, " << amplitudes_.back() << "]";
        throw CalibrationError(os.str());
    }
    amplitude = std::min(amplitude, amplitudes_.back());
    if (interp_) return (*interp_->pchip)(amplitude);
    auto it = std::upper_bound(amplitudes_.begin(), amplitudes_.end(), amplitude);
    const std::size_t hi = std::min<std::size_t>(it - amplitudes_.begin(), amplitudes_.size() - 1);
    const std::size_t lo = hi - 1;
    const double w = (amplitude - amplitudes_[lo]) / (amplitudes_[hi] - amplitudes_[lo]);
    return (1.0 - w) * shifts_[lo] + w * shifts_[hi];
}

Envelope compensate_phase(const Envelope& env, const StarkMap& stark) {
    std::vector<cplx> out(env.samples());
    double phase = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double shift = stark(std::abs(out[i]));
        if (i > 0) phase -= two_pi * env.dt() * 0.5 * (prev + shift);
        prev = shift;
        out[i] *= std::polar(1.0, phase);
    }
    return {env.dt(), env.t0(), std::move(out)};
}

Envelope build_train(const std::vector<TrainPeak>& peaks, double dt, const StarkMap* stark) {
    if (peaks.empty()) throw EnvelopeError("train needs at least one peak");
    double end = 0.0;
    for (const auto& p : peaks) {
        if (p.omega0 < 0.0 || !(p.duration > 0.0) || p.start < 0.0) {
            throw EnvelopeError("train peaks need omega0 >= 0, duration > 0, start >= 0");
        }
        end = std::max(end, p.start + p.duration);
    }
    const std::size_t n = sample_count(end, dt);
    std::vector<cplx> s(n, 0.0);
    for (const auto& p : peaks) {
        const cplx rot = std::polar(1.0, p.phase_offset);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = sin2_value(p.omega0, p.duration, static_cast<double>(i) * dt - p.start);
            if (v != 0.0) s[i] += v * rot;
        }
    }
    Envelope env(dt, 0.0, std::move(s));
    return stark ? compensate_phase(env, *stark) : env;
}

std::vector<TrainPeak> reference_train_peaks() {
    std::vector<TrainPeak> peaks;
    for (int k = 0; k < 6; ++k) peaks.push_back({0.350, 60.0, 170.0 * k, 0.0});
    return peaks;
}

Envelope GaussianPulse::envelope(double dt, double t0) const {
    if (!(sigma > 0.0) || !(length > 0.0)) throw EnvelopeError("Gaussian pulse needs sigma, length > 0");
    const std::size_t n = sample_count(length, dt);
    const double centre = 0.5 * length;
    const cplx rot = std::polar(amplitude, phase);
    std::vector<cplx> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) * dt - centre;
        s[i] = rot * std::exp(-u * u / (2.0 * sigma * sigma));
    }
    return {dt, t0, std::move(s)};
}

double GaussianPulse::area() const {
    const double half = 0.5 * length / (sigma * std::numbers::sqrt2);
    return std::abs(amplitude) * sigma * std::sqrt(2.0 * std::numbers::pi) * std::erf(half);
}

RabiAmplitudes RabiAmplitudes::analytic(const DeviceParams& params, double sigma, double length) {
    const TransmonLevels lv = transmon_levels(params);
    GaussianPulse unit{Transition::ge, 1.0, sigma, length, 0.0};
    const double area = unit.area();
    // θ = 2π · ⟨k−1|b|k⟩ · ∫Ω dt
    return {0.5 / (lv.ladder[0] * area), 0.5 / (lv.ladder[1] * area)};
}

std::vector<GaussianPulse> build_init_sequence(InitKind kind, const RabiAmplitudes& rabi) {
    const double ge = kind == InitKind::prepare_f ? rabi.pi_ge : 0.5 * rabi.pi_ge;
    return {GaussianPulse{Transition::ge, ge}, GaussianPulse{Transition::ef, rabi.pi_ef}};
}

double sequence_duration(const std::vector<GaussianPulse>& pulses) {
    double total = 0.0;
    for (const auto& p : pulses) total += p.length;
    return total;
}

}  // namespace shaping

#include "photon_shaping/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "parallel.hpp"
#include "photon_shaping/diagnostics.hpp"
#include "photon_shaping/errors.hpp"

namespace shaping {
namespace {

std::vector<double> arange(double first, double last, double step) {
    std::vector<double> out;
    for (int i = 0;; ++i) {
        const double v = first + step * i;
        if (v > last + 1e-9 * step) break;
        out.push_back(v);
    }
    return out;
}

// Golden-section maximization of f on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, double tol) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Square pulse with cos² edges. Hard edges project the undriven state onto
// the driven eigenbasis and the resulting micromotion fringes (period 1/length
// in detuning) swamp the resonance dip at low amplitude.
Envelope flat_top(double amplitude, double length, double rise) {
    if (rise <= 0.0) return square_pulse(amplitude, length);
    if (2.0 * rise > length) throw Error("flat-top edges longer than the pulse");
    const auto n = static_cast<std::size_t>(std::llround(length / default_envelope_dt)) + 1;
    std::vector<cplx> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = default_envelope_dt * static_cast<double>(i);
        const double edge = std::min({t, length - t, rise}) / rise;
        const double w = std::sin(0.5 * std::numbers::pi * std::clamp(edge, 0.0, 1.0));
        s[i] = amplitude * w * w;
    }
    return Envelope(default_envelope_dt, 0.0, std::move(s));
}

PropagateOptions quiet(PropagateOptions o) {
    o.keep_snapshots = false;
    return o;
}

}  // namespace

const SweepPoint& SweepResult::at(std::size_t i, std::size_t j) const {
    return grid.at(i * amplitudes.size() + j);
}

SweepPoint evaluate_symmetry_point(const DeviceParams& params, double duration, double amplitude,
                                   const StarkMap& stark, const EmissionOptions& emission) {
    SweepPoint p{duration, amplitude};
    const Envelope env = compensate_phase(synthesize_sin2(amplitude, duration), stark);
    EmissionOptions opts = emission;
    opts.propagate = quiet(opts.propagate);
    const OutputRecord rec = emit_photon(params, env, InitialState::g0_plus_f0, opts);
    const double pf0 = rec.transmon_population(2).front();
    p.efficiency = pf0 > 0.0 ? rec.emitted / pf0 : 0.0;
    p.residual_f0 = rec.residual_f0();
    try {
        p.s = symmetry(mode_function(rec)).s;
    } catch (const AnalysisError&) {
        p.s = 0.0;
    }
    return p;
}

SweepResult sweep_symmetry(const DeviceParams& params, const SweepOptions& options) {
    SweepResult out;
    out.durations = options.durations.empty() ? arange(60.0, 500.0, 40.0) : options.durations;
    out.amplitudes = options.amplitudes.empty() ? arange(0.1, 1.0, 0.1) : options.amplitudes;
    const StarkMap stark = options.stark ? *options.stark : StarkMap::from_spectrum(params);
    const double a_max = stark.max_amplitude();
    for (double a : out.amplitudes) {
        if (!(a > 0.0) || a > a_max) throw ConfigError("amplitudes", "sweep amplitude outside (0, Stark map range]");
    }
    for (double t : out.durations) {
        if (!(t > 0.0)) throw ConfigError("durations", "sweep durations must be positive");
    }

    const std::size_t nt = out.durations.size(), na = out.amplitudes.size();
    out.grid.resize(nt * na);
    detail::parallel_for(out.grid.size(), options.threads, [&](std::size_t k) {
        out.grid[k] = evaluate_symmetry_point(params, out.durations[k / na], out.amplitudes[k % na], stark,
                                              options.emission);
    });
    if (std::all_of(out.grid.begin(), out.grid.end(), [](const SweepPoint& p) { return p.efficiency < 1e-6; })) {
        throw ConfigError("sweep", "no emission anywhere on the sweep grid");
    }
    const double floor = options.min_efficiency;
    auto better = [floor](const SweepPoint& a, const SweepPoint& b) {
        const bool ea = a.efficiency >= floor, eb = b.efficiency >= floor;
        return ea != eb ? ea : a.s > b.s;
    };
    out.best = *std::max_element(out.grid.begin(), out.grid.end(),
                                 [&](const SweepPoint& a, const SweepPoint& b) { return better(b, a); });
    if (out.best.efficiency < floor) warn("no sweep cell reaches the efficiency floor; best is by symmetry alone");

    // Coordinate descent around the best cell, steps halved each round.
    double step_t = nt > 1 ? (out.durations[1] - out.durations[0]) / 2.0 : out.durations[0] / 4.0;
    double step_a = na > 1 ? (out.amplitudes[1] - out.amplitudes[0]) / 2.0 : out.amplitudes[0] / 4.0;
    for (int round = 0; round < options.refine_rounds; ++round) {
        std::vector<SweepPoint> trial;
        for (double dt : {-step_t, step_t}) trial.push_back({out.best.duration + dt, out.best.amplitude});
        for (double da : {-step_a, step_a}) trial.push_back({out.best.duration, out.best.amplitude + da});
        std::erase_if(trial, [&](const SweepPoint& p) {
            return p.duration <= 0.0 || p.amplitude <= 0.0 || p.amplitude > a_max;
        });
        detail::parallel_for(trial.size(), options.threads, [&](std::size_t k) {
            trial[k] = evaluate_symmetry_point(params, trial[k].duration, trial[k].amplitude, stark, options.emission);
        });
        for (const auto& p : trial) {
            out.refinements.push_back(p);
            if (better(p, out.best)) out.best = p;
        }
        if (round < 2) {
            step_t /= 2.0;
            step_a /= 2.0;
        }
    }
    return out;
}

SweepPoint calibrate_amplitude(const DeviceParams& params, double duration, const StarkMap& stark, double lo,
                               double hi, double tol, const EmissionOptions& emission) {
    if (!(lo > 0.0 && hi > lo && hi <= stark.max_amplitude())) throw ConfigError("amplitude", "invalid search range");
    const double best = golden_max(
        [&](double a) { return evaluate_symmetry_point(params, duration, a, stark, emission).s; }, lo, hi, tol);
    return evaluate_symmetry_point(params, duration, best, stark, emission);
}

StarkScan measure_stark_shift(const DeviceParams& params, double amplitude, const StarkOptions& options) {
    if (!(amplitude > 0.0)) throw Error("Stark scan needs a positive amplitude");
    if (options.coarse_points < 3 || options.fine_points < options.fit_points || options.fit_points < 3) {
        throw Error("Stark scan needs at least 3 coarse points and fit_points <= fine_points");
    }
    StarkScan scan;
    scan.amplitude = amplitude;
    const Matrix rho0 = initial_density(params, InitialState::f0);
    const Envelope env = flat_top(amplitude, options.pulse_length, options.rise);
    PropagateOptions popts = quiet(options.propagate);
    popts.stride = std::max(popts.stride, 1.0);

    auto run = [&](const std::vector<double>& deltas) {
        std::vector<double> pf(deltas.size());
        detail::parallel_for(deltas.size(), options.threads, [&](std::size_t k) {
            const LindbladModel m = LindbladModel::emission(params, env, options.decoherence, deltas[k]);
            pf[k] = propagate(m, rho0, env.t_end(), popts).record.final_transmon_population(2);
        });
        scan.detunings.insert(scan.detunings.end(), deltas.begin(), deltas.end());
        scan.p_f.insert(scan.p_f.end(), pf.begin(), pf.end());
        return pf;
    };
    auto linspace = [](double lo, double hi, int n) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
        return v;
    };

    double half = 2.0 * std::abs(stark_shift_perturbative(params, amplitude)) + 0.002;
    std::vector<double> coarse;
    std::size_t imin = 0;
    for (int attempt = 0; attempt < 2; ++attempt) {
        coarse = linspace(-half, half, options.coarse_points);
        const auto pf = run(coarse);
        imin = static_cast<std::size_t>(std::min_element(pf.begin(), pf.end()) - pf.begin());
        if (imin > 0 && imin + 1 < coarse.size()) break;
        if (attempt == 1) {
            std::ostringstream os;
            os << "no interior minimum of P(f) within +-" << half << " GHz at amplitude " << amplitude;
            throw CalibrationError(os.str());
        }
        half *= 2.0;
    }

    const double step = coarse[1] - coarse[0];
    const std::vector<double> fine = linspace(coarse[imin] - step, coarse[imin] + step, options.fine_points);
    const auto pf = run(fine);
    std::vector<std::size_t> order(fine.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + options.fit_points, order.end(),
                      [&](std::size_t a, std::size_t b) { return pf[a] < pf[b]; });

    // Least-squares parabola through the lowest points, centred on the best one.
    const double x0 = fine[order[0]];
    Eigen::MatrixXd a(options.fit_points, 3);
    Eigen::VectorXd y(options.fit_points);
    for (int k = 0; k < options.fit_points; ++k) {
        const double x = (fine[order[k]] - x0) / step;
        a.row(k) << 1.0, x, x * x;
        y(k) = pf[order[k]];
    }
    const Eigen::Vector3d c = a.colPivHouseholderQr().solve(y);
    double shift = x0;
    if (c(2) > 0.0) shift = x0 - step * c(1) / (2.0 * c(2));
    scan.resonance = std::clamp(shift, fine.front(), fine.back());
    scan.shift = scan.resonance;
    return scan;
}

StarkCalibration stark_calibration(const DeviceParams& params, const std::vector<double>& amplitudes,
                                   const StarkOptions& options) {
    double prev = 0.0;
    for (double a : amplitudes) {
        if (a == 0.0) continue;
        if (a <= prev) throw ConfigError("amplitudes", "Stark calibration amplitudes must increase");
        if (a > default_awg_ceiling) throw ConfigError("amplitudes", "Stark calibration amplitude above the AWG ceiling");
        prev = a;
    }
    StarkCalibration out;
    const auto& ref = options.reference_amplitudes;
    if (ref.size() == 2) {
        if (!(ref[0] > 0.0 && ref[1] > ref[0])) throw ConfigError("reference_amplitudes", "need 0 < a1 < a2");
        for (double a : ref) out.reference_scans.push_back(measure_stark_shift(params, a, options));
        const double x1 = ref[0] * ref[0], x2 = ref[1] * ref[1];
        const double r1 = out.reference_scans[0].resonance, r2 = out.reference_scans[1].resonance;
        out.zero_offset = (x2 * r1 - x1 * r2) / (x2 - x1);
        for (auto& s : out.reference_scans) s.shift = s.resonance - out.zero_offset;
    } else if (!ref.empty()) {
        throw ConfigError("reference_amplitudes", "expected two amplitudes or none");
    }

    std::vector<double> amps{0.0}, shifts{0.0};
    for (double a : amplitudes) {
        if (a == 0.0) continue;
        out.scans.push_back(measure_stark_shift(params, a, options));
        out.scans.back().shift = out.scans.back().resonance - out.zero_offset;
        amps.push_back(a);
        shifts.push_back(out.scans.back().shift);
    }
    out.map = StarkMap(std::move(amps), std::move(shifts));
    return out;
}

FrequencyCalibration frequency_calibration(const DeviceParams& params, const Envelope& pulse,
                                           const FrequencyOptions& options) {
    FrequencyCalibration out;
    out.offsets = options.offsets;
    std::sort(out.offsets.begin(), out.offsets.end());
    if (out.offsets.size() < 2) throw ConfigError("offsets", "frequency calibration needs at least two offsets");
    out.peaks.resize(out.offsets.size());
    out.symmetries.resize(out.offsets.size());
    detail::parallel_for(out.offsets.size(), options.threads, [&](std::size_t k) {
        EmissionOptions e = options.emission;
        e.drive_offset = options.emission.drive_offset + out.offsets[k];
        e.propagate = quiet(e.propagate);
        const ModeFunction mode = mode_function(emit_photon(params, pulse, options.initial, e));
        out.peaks[k] = fourier_spectrum(mode).peak_frequency;
        out.symmetries[k] = symmetry(mode).s;
    });

    for (std::size_t k = 1; k < out.peaks.size(); ++k) out.monotone = out.monotone && out.peaks[k] > out.peaks[k - 1];
    if (!out.monotone) {
        warn("photon peak is not monotone in the drive offset; reporting the raw curve");
        std::size_t best = 0;
        for (std::size_t k = 1; k < out.peaks.size(); ++k) {
            if (std::abs(out.peaks[k]) < std::abs(out.peaks[best])) best = k;
        }
        out.correction = options.emission.drive_offset + out.offsets[best];
        return out;
    }
    // Bracketing interval, or the nearest end segment for extrapolation.
    std::size_t k = 1;
    while (k + 1 < out.peaks.size() && out.peaks[k] < 0.0) ++k;
    const double x0 = out.offsets[k - 1], x1 = out.offsets[k];
    const double y0 = out.peaks[k - 1], y1 = out.peaks[k];
    out.correction = options.emission.drive_offset + x0 - y0 * (x1 - x0) / (y1 - y0);
    return out;
}

double frequency_calibration_symmetry(const DeviceParams& params, const Envelope& pulse,
                                      const FrequencyOptions& options, double tol) {
    if (options.offsets.size() < 2) throw ConfigError("offsets", "frequency calibration needs at least two offsets");
    const auto [lo, hi] = std::minmax_element(options.offsets.begin(), options.offsets.end());
    auto s_at = [&](double offset) {
        EmissionOptions e = options.emission;
        e.drive_offset = options.emission.drive_offset + offset;
        e.propagate = quiet(e.propagate);
        return symmetry(mode_function(emit_photon(params, pulse, options.initial, e))).s;
    };
    return options.emission.drive_offset + golden_max(s_at, *lo, *hi, tol);
}

DeviceParams transmon_only(const DeviceParams& params) {
    DeviceParams p = params;
    p.n_resonator = 1;
    return p;
}

Matrix run_gaussian_sequence(const DeviceParams& params, const std::vector<GaussianPulse>& pulses, const Matrix& rho0,
                             double frame_ghz, const Decoherence& decoherence, double t_start,
                             const PropagateOptions& options) {
    const double ge = dressed_transmon_transition(params, 0);
    const double ef = dressed_transmon_transition(params, 1);
    const PropagateOptions popts = quiet(options);
    Matrix rho = rho0;
    double t = t_start;
    for (const auto& pulse : pulses) {
        LindbladModel m;
        m.params = params;
        m.envelope = pulse.envelope(default_envelope_dt, t);
        m.frame_ghz = frame_ghz;
        m.carrier_offset = (pulse.transition == Transition::ge ? ge : ef) - frame_ghz;
        m.output_frame_ghz = frame_ghz;
        m.decoherence = decoherence;
        rho = propagate(m, rho, t, m.envelope.t_end(), popts).final_state;
        t = m.envelope.t_end();
    }
    return rho;
}

RabiAmplitudes calibrate_rabi(const DeviceParams& params, double sigma, double length) {
    const DeviceParams p = transmon_only(params);
    const CompositeBasis basis = p.basis();
    const RabiAmplitudes guess = RabiAmplitudes::analytic(params, sigma, length);
    const double frame = dressed_transmon_transition(p, 0);

    auto calibrate = [&](Transition tr, int from, double a0) {
        Matrix rho0 = Matrix::Zero(basis.dim(), basis.dim());
        rho0(basis.index(from, 0), basis.index(from, 0)) = 1.0;
        const int to = basis.index(from + 1, 0);
        auto transfer = [&](double amp) {
            const GaussianPulse g{tr, amp, sigma, length, 0.0};
            return run_gaussian_sequence(p, {g}, rho0, frame, Decoherence::none())(to, to).real();
        };
        return golden_max(transfer, 0.7 * a0, 1.3 * a0, 1e-6 * a0);
    };
    return {calibrate(Transition::ge, 0, guess.pi_ge), calibrate(Transition::ef, 1, guess.pi_ef)};
}

ResetResult reset_protocol(const DeviceParams& params, double thermal_p_e, const ResetOptions& options) {
    if (!(thermal_p_e >= 0.0 && thermal_p_e <= 0.5)) throw Error("thermal population must lie in [0, 0.5]");
    const RabiAmplitudes rabi = options.rabi ? *options.rabi : calibrate_rabi(params);
    const StarkMap stark = options.stark ? *options.stark : StarkMap::from_spectrum(params);
    const CompositeBasis basis = params.basis();
    const double frame = reference_drive_frequency(params);
    const PropagateOptions popts = quiet(options.propagate);

    const Vector g0 = dressed_state(params, 0, 0), e0 = dressed_state(params, 1, 0);
    Matrix rho = (1.0 - thermal_p_e) * g0 * g0.adjoint() + thermal_p_e * e0 * e0.adjoint();
    auto transmon_pop = [&](int level) {
        double s = 0.0;
        for (int n = 0; n < basis.n_resonator(); ++n) s += rho(basis.index(level, n), basis.index(level, n)).real();
        return s;
    };

    ResetResult out;
    out.initial_p_e = transmon_pop(1);
    const GaussianPulse pi_ef{Transition::ef, rabi.pi_ef};
    const double wait = options.wait_kappa / params.kappa_rate();
    double t = 0.0;
    for (int round = 0; round < options.rounds; ++round) {
        rho = run_gaussian_sequence(params, {pi_ef}, rho, frame, options.decoherence, t, options.propagate);
        t += pi_ef.length;

        const Envelope transfer = compensate_phase(
            synthesize_sin2(options.transfer_amplitude, options.transfer_duration, default_envelope_dt, t), stark);
        const LindbladModel m = LindbladModel::emission(params, transfer, options.decoherence);
        const double t_next = transfer.t_end() + wait;
        rho = propagate(m, rho, t, t_next, popts).final_state;
        t = t_next;
        out.p_e_after_round.push_back(transmon_pop(1));
    }
    out.final_p_e = transmon_pop(1);
    out.final_p_f = transmon_pop(2);
    out.duration = t;
    return out;
}

}  // namespace shaping

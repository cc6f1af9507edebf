#include "photon_shaping/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "photon_shaping/diagnostics.hpp"
#include "photon_shaping/errors.hpp"

namespace shaping {
namespace {

struct Context {
    const ScenarioConfig& config;
    std::filesystem::path dir;
    StarkMap stark;
    ScenarioResult& result;

    std::filesystem::path file(const std::string& name) {
        result.files.push_back(dir / name);
        return dir / name;
    }

    void check(bool ok, const std::string& what) {
        if (!ok) result.failures.push_back(what);
    }

    void check_record(const OutputRecord& r, const std::string& label) {
        check(r.max_trace_drift < 1e-7, label + ": trace drift " + format_number(r.max_trace_drift));
        check(r.min_probe_eigenvalue > -1e-6, label + ": probe eigenvalue " + format_number(r.min_probe_eigenvalue));
    }
};

// f0 runs carry no mean field, so their mode comes from the power.
Json photon_summary(const OutputRecord& rec, InitialState initial) {
    const double pf0 = rec.transmon_population(2).front();
    Json j = {{"emitted", rec.emitted},
              {"efficiency", pf0 > 0.0 ? rec.emitted / pf0 : 0.0},
              {"residual_f0", rec.residual_f0()},
              {"max_trace_drift", rec.max_trace_drift},
              {"min_probe_eigenvalue", rec.min_probe_eigenvalue}};
    const ModeFunction mode =
        mode_function(rec, initial == InitialState::f0 ? ModeSource::power : ModeSource::mean_field);
    const SymmetryReport sym = symmetry(mode);
    j["s"] = sym.s;
    j["t0_ns"] = sym.t0_opt;
    if (initial == InitialState::g0_plus_f0) {
        const cplx a = matched_filter(mode, rec);
        j["phase_std_rad"] = phase_std(mode);
        j["mean_A"] = {a.real(), a.imag()};
        j["peak_frequency_GHz"] = fourier_spectrum(mode).peak_frequency;
    }
    return j;
}

struct PhotonRun {
    OutputRecord record;
    Json summary;
};

PhotonRun run_photon(Context& ctx, const Envelope& env, InitialState initial, const std::string& tag) {
    PhotonRun run{emit_photon(ctx.config.device, env, initial, ctx.config.emission_options()), {}};
    ctx.check_record(run.record, tag);
    write_envelope_csv(ctx.file(tag + "_envelope.csv"), env);
    write_record_csv(ctx.file(tag + "_record.csv"), run.record);
    if (initial == InitialState::g0_plus_f0) {
        const ModeFunction mode = mode_function(run.record);
        write_mode_csv(ctx.file(tag + "_mode.csv"), mode);
        write_spectrum_csv(ctx.file(tag + "_spectrum.csv"), fourier_spectrum(mode));
    }
    run.summary = photon_summary(run.record, initial);
    return run;
}

Envelope sin2_pulse(const StarkMap& stark, double amplitude, double duration, bool compensate) {
    const Envelope env = synthesize_sin2(amplitude, duration);
    return compensate ? compensate_phase(env, stark) : env;
}

// ---------------------------------------------------------------------------

void simulate(Context& ctx) {
    const Envelope env = configured_pulse(ctx.config, ctx.stark);
    const auto run = run_photon(ctx, env, ctx.config.pulse.initial, "photon");
    ctx.result.summary["photon"] = run.summary;
}

void fig2_symmetric(Context& ctx) {
    struct Case {
        double amplitude, duration, min_s, max_s;
    };
    const Case cases[] = {{0.68, 20.0, 0.0, 0.95}, {0.70, 200.0, 0.97, 1.0}, {0.60, 500.0, 0.98, 1.0}};
    Json photons = Json::array();
    for (const auto& c : cases) {
        const std::string tag = "T" + std::to_string(static_cast<int>(c.duration)) + "ns";
        const auto run = run_photon(ctx, sin2_pulse(ctx.stark, c.amplitude, c.duration, true),
                                    InitialState::g0_plus_f0, tag);
        Json j = run.summary;
        j["amplitude_GHz"] = c.amplitude;
        j["duration_ns"] = c.duration;
        const double s = j["s"].get<double>();
        ctx.check(s >= c.min_s && s <= c.max_s,
                  tag + ": s = " + format_number(s) + " outside [" + format_number(c.min_s) + ", " +
                      format_number(c.max_s) + "]");
        photons.push_back(j);
    }
    ctx.result.summary["photons"] = photons;
}

void fig3_tomography(Context& ctx) {
    const ScenarioConfig& cfg = ctx.config;
    const auto& tc = cfg.tomography;
    const Envelope env = sin2_pulse(ctx.stark, tc.amplitude, tc.duration, true);
    const NoiseModel noise{tc.noise_number};

    Eigen::MatrixXcd vacuum = Eigen::MatrixXcd::Zero(2, 2);
    vacuum(0, 0) = 1.0;
    ShotOptions shots;
    shots.threads = cfg.threads;
    shots.seed = cfg.seed;
    const Histogram2D ref_hist = simulate_shots(vacuum, noise, tc.shots, shots);
    write_histogram_csv(ctx.file("reference_histogram.csv"), ref_hist);
    const MomentSet ref = moments_from_histogram(ref_hist, tc.max_order);
    const double n_est = estimate_noise_number(ref);
    ctx.result.summary["noise_number_estimate"] = {{"value", n_est}, {"error", ref.error(1, 1)}};
    ctx.check(std::abs(n_est - tc.noise_number) <= 5.0 * ref.error(1, 1) + 1e-12,
              "noise number estimate " + format_number(n_est) + " inconsistent with " +
                  format_number(tc.noise_number));

    struct Protocol {
        const char* tag;
        InitialState initial;
        Eigen::VectorXcd target;
    };
    Eigen::VectorXcd one = Eigen::VectorXcd::Zero(2), plus = Eigen::VectorXcd::Ones(2) / std::sqrt(2.0);
    one(1) = 1.0;
    const Protocol protocols[] = {{"fock", InitialState::f0, one}, {"superposition", InitialState::g0_plus_f0, plus}};

    std::uint64_t stream = 1;
    for (const auto& p : protocols) {
        const auto run = run_photon(ctx, env, p.initial, p.tag);
        const Eigen::MatrixXcd rho = photon_state(run.record);
        shots.seed = cfg.seed + stream++;
        const Histogram2D hist = simulate_shots(rho, noise, tc.shots, shots);
        write_histogram_csv(ctx.file(std::string(p.tag) + "_histogram.csv"), hist);
        const MomentSet v = moments_from_histogram(hist, tc.max_order);
        const MomentSet a = deconvolve_moments(v, ref);
        const DensityMatrixEstimate est = mle_density_matrix(a, tc.n_max, p.target);
        ctx.check(est.converged, std::string(p.tag) + ": MLE did not converge");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(est.rho);
        ctx.check(es.eigenvalues().minCoeff() > -1e-9 && std::abs(est.rho.trace().real() - 1.0) < 1e-9,
                  std::string(p.tag) + ": reconstructed state is not a density matrix");

        Json j = run.summary;
        j["signal_state"] = {{"p1", rho(1, 1).real()}, {"coherence", {rho(1, 0).real(), rho(1, 0).imag()}}};
        j["moments"] = to_json(a);
        j["estimate"] = to_json(est);
        ctx.result.summary[p.tag] = j;
    }
}

void fig4_train(Context& ctx) {
    const auto peaks = reference_train_peaks();
    auto run_train = [&](int flipped) {
        auto pk = peaks;
        if (flipped >= 0) pk[static_cast<std::size_t>(flipped)].phase_offset = std::numbers::pi;
        const Envelope env = build_train(pk, default_envelope_dt, &ctx.stark);
        const std::string tag = flipped < 0 ? "reference" : "flip" + std::to_string(flipped + 1);
        return run_photon(ctx, env, InitialState::g0_plus_f0, tag);
    };

    const PhotonRun ref = run_train(-1);
    const OutputRecord& r0 = ref.record;
    const double pmax = *std::max_element(r0.power.begin(), r0.power.end());

    // Peak windows: one train period from each peak's start.
    const double period = peaks.size() > 1 ? peaks[1].start - peaks[0].start : peaks[0].duration;
    auto window_of = [&](double t) -> int {
        for (std::size_t k = 0; k < peaks.size(); ++k) {
            if (t >= peaks[k].start && t < peaks[k].start + period) return static_cast<int>(k);
        }
        return -1;
    };
    auto voltages = [&](const OutputRecord& r) {
        std::vector<cplx> v(peaks.size(), 0.0);
        for (std::size_t i = 0; i + 1 < r.size(); ++i) {
            const int k = window_of(r.times[i]);
            if (k >= 0) v[static_cast<std::size_t>(k)] += 0.5 * (r.a_out[i] + r.a_out[i + 1]) * (r.times[i + 1] - r.times[i]);
        }
        return v;
    };

    // Resolved peaks: power between neighbours drops below half the smaller maximum.
    std::vector<double> maxima(peaks.size(), 0.0);
    for (std::size_t i = 0; i < r0.size(); ++i) {
        if (const int k = window_of(r0.times[i]); k >= 0) maxima[k] = std::max(maxima[k], r0.power[i]);
    }
    int resolved = 0;
    for (std::size_t k = 0; k < peaks.size(); ++k) {
        const double t_peak = peaks[k].start + 0.5 * peaks[k].duration;
        double valley = 0.0;
        if (k + 1 < peaks.size()) {
            const double t_next = peaks[k + 1].start + 0.5 * peaks[k + 1].duration;
            valley = pmax;
            for (std::size_t i = 0; i < r0.size(); ++i) {
                if (r0.times[i] > t_peak && r0.times[i] < t_next) valley = std::min(valley, r0.power[i]);
            }
        }
        const double neighbour = k + 1 < peaks.size() ? std::min(maxima[k], maxima[k + 1]) : maxima[k];
        if (maxima[k] > 0.05 * pmax && valley < 0.5 * neighbour) ++resolved;
    }
    ctx.check(resolved == static_cast<int>(peaks.size()),
              std::to_string(resolved) + " of " + std::to_string(peaks.size()) + " power peaks resolved");

    const auto v0 = voltages(r0);
    Json flips = Json::array();
    for (int k = 0; k < static_cast<int>(peaks.size()); ++k) {
        const PhotonRun run = run_train(k);
        const auto v = voltages(run.record);
        double dev = 0.0;
        for (std::size_t i = 0; i < r0.size() && i < run.record.size(); ++i) {
            dev = std::max(dev, std::abs(run.record.power[i] - r0.power[i]));
        }
        const auto kk = static_cast<std::size_t>(k);
        const double ratio = std::real(v[kk] / v0[kk]);
        ctx.check(std::abs(v[kk] + v0[kk]) <= 0.1 * std::abs(v0[kk]),
                  "flip " + std::to_string(k + 1) + ": voltage ratio " + format_number(ratio));
        ctx.check(dev <= 0.02 * pmax, "flip " + std::to_string(k + 1) + ": power deviation " +
                                          format_number(dev / pmax) + " of the peak");
        flips.push_back({{"peak", k + 1}, {"voltage_ratio", ratio}, {"max_power_deviation", dev / pmax}});
    }
    Json vref = Json::array();
    for (const auto& v : v0) vref.push_back({v.real(), v.imag()});
    ctx.result.summary["reference"] = ref.summary;
    ctx.result.summary["peak_voltages"] = vref;
    ctx.result.summary["resolved_peaks"] = resolved;
    ctx.result.summary["flips"] = flips;
}

void fig_a2_sweep(Context& ctx) {
    SweepOptions opts;
    opts.durations = ctx.config.sweep.durations;
    opts.amplitudes = ctx.config.sweep.amplitudes;
    opts.refine_rounds = ctx.config.sweep.refine_rounds;
    opts.min_efficiency = ctx.config.sweep.min_efficiency;
    opts.threads = ctx.config.threads;
    opts.emission = ctx.config.emission_options();
    opts.stark = ctx.stark;
    const SweepResult sweep = sweep_symmetry(ctx.config.device, opts);
    write_json(ctx.file("sweep.json"), to_json(sweep));
    {
        std::ofstream out(ctx.file("sweep.csv"));
        out << "duration_ns,amplitude_GHz,s,efficiency,residual_f0\n";
        for (const auto& p : sweep.grid) {
            out << format_number(p.duration) << ',' << format_number(p.amplitude) << ',' << format_number(p.s) << ','
                << format_number(p.efficiency) << ',' << format_number(p.residual_f0) << '\n';
        }
    }
    double grid_best = 0.0;
    for (const auto& p : sweep.grid) {
        if (p.efficiency >= opts.min_efficiency) grid_best = std::max(grid_best, p.s);
    }
    ctx.check(sweep.best.s >= grid_best, "refinement lowered the best s");
    ctx.result.summary["best"] = to_json(sweep)["best"];
}

void fig_a2_stark(Context& ctx) {
    StarkOptions opts;
    opts.pulse_length = ctx.config.stark.pulse_length;
    opts.rise = ctx.config.stark.rise;
    opts.reference_amplitudes = ctx.config.stark.reference_amplitudes;
    opts.decoherence = ctx.config.simulation.decoherence;
    opts.propagate = ctx.config.propagate_options();
    opts.threads = ctx.config.threads;
    const StarkCalibration cal = stark_calibration(ctx.config.device, ctx.config.stark.amplitudes, opts);
    write_json(ctx.file("stark_calibration.json"), to_json(cal));
    write_json(ctx.file("stark_map.json"), to_json(cal.map));
    const auto& s = cal.map.shifts();
    bool monotone = true;
    for (std::size_t k = 1; k < s.size(); ++k) monotone = monotone && std::abs(s[k]) > std::abs(s[k - 1]);
    ctx.check(monotone, "calibrated Stark shift is not monotone in amplitude");
    Json cmp = Json::array();
    for (const auto& scan : cal.scans) {
        cmp.push_back({{"amplitude_GHz", scan.amplitude}, {"shift_GHz", scan.shift},
                       {"dressed_shift_GHz", dressed_spectrum(ctx.config.device, scan.amplitude).stark_shift}});
    }
    ctx.result.summary["zero_offset_GHz"] = cal.zero_offset;
    ctx.result.summary["shifts"] = cmp;
}

void fig_a2_frequency(Context& ctx) {
    FrequencyOptions opts;
    opts.offsets = ctx.config.frequency.offsets;
    opts.initial = InitialState::g0_plus_f0;
    opts.emission = ctx.config.emission_options();
    opts.threads = ctx.config.threads;
    const Envelope env = configured_pulse(ctx.config, ctx.stark);
    const FrequencyCalibration cal = frequency_calibration(ctx.config.device, env, opts);
    const double by_symmetry = frequency_calibration_symmetry(ctx.config.device, env, opts);
    Json j = to_json(cal);
    j["correction_from_symmetry_GHz"] = by_symmetry;
    write_json(ctx.file("frequency_calibration.json"), j);
    ctx.check(cal.monotone, "photon peak not monotone in drive offset");
    ctx.result.summary["frequency"] = j;
}

void reset(Context& ctx) {
    const auto& rc = ctx.config.reset;
    ResetOptions opts;
    opts.rounds = rc.rounds;
    opts.transfer_amplitude = rc.transfer_amplitude;
    opts.transfer_duration = rc.transfer_duration;
    opts.wait_kappa = rc.wait_kappa;
    opts.decoherence = ctx.config.simulation.decoherence;
    opts.propagate = ctx.config.propagate_options();
    opts.stark = ctx.stark;
    const ResetResult r = reset_protocol(ctx.config.device, rc.thermal_p_e, opts);
    write_json(ctx.file("reset.json"), to_json(r));
    double prev = r.initial_p_e;
    for (double p : r.p_e_after_round) {
        ctx.check(p <= prev + 1e-9, "excited population increased between rounds");
        prev = p;
    }
    ctx.result.summary["reset"] = to_json(r);
}

using Runner = std::function<void(Context&)>;

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> r{
        {"simulate", simulate},           {"fig2-symmetric", fig2_symmetric}, {"fig3-tomography", fig3_tomography},
        {"fig4-train", fig4_train},       {"fig-a2-sweep", fig_a2_sweep},     {"fig-a2-stark", fig_a2_stark},
        {"fig-a2-frequency", fig_a2_frequency}, {"reset", reset}};
    return r;
}

}  // namespace

std::vector<std::string> scenario_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : runners()) out.push_back(k);
    return out;
}

Envelope configured_pulse(const ScenarioConfig& config, const StarkMap& stark) {
    const Envelope env = config.pulse.envelope_csv.empty()
                             ? synthesize_sin2(config.pulse.amplitude, config.pulse.duration)
                             : read_envelope_csv(config.pulse.envelope_csv);
    return config.pulse.compensate ? compensate_phase(env, stark) : env;
}

Eigen::MatrixXcd photon_state(const OutputRecord& record) {
    const double p = std::clamp(record.emitted, 0.0, 1.0);
    cplx c = 0.0;
    try {
        const ModeFunction mode = mode_function(record);
        c = matched_filter(mode, record);
    } catch (const AnalysisError&) {
        // no mean field: incoherent mixture
    }
    const double bound = std::sqrt(p * (1.0 - p));
    if (std::abs(c) > bound) {
        warn("photon coherence exceeds the two-level bound; clipped");
        c *= bound / std::abs(c);
    }
    Eigen::MatrixXcd rho(2, 2);
    rho << 1.0 - p, std::conj(c), c, p;
    return rho;
}

ScenarioResult run_scenario(const std::string& name, const ScenarioConfig& config,
                            const std::filesystem::path& out_dir, const StarkMap* stark) {
    const auto it = runners().find(name);
    if (it == runners().end()) throw ConfigError("scenario", "unknown scenario '" + name + "'");
    ScenarioResult result;
    result.name = name;
    std::filesystem::create_directories(out_dir);
    Context ctx{config, out_dir, stark ? *stark : StarkMap::from_spectrum(config.device), result};
    {
        std::ofstream echo(ctx.file("config.yaml"), std::ios::binary);
        echo << echo_config(config);
    }
    try {
        it->second(ctx);
    } catch (const Error& e) {
        throw Error("scenario " + name + ": " + e.what());
    }
    Json summary = {{"scenario", name}, {"seed", config.seed}, {"passed", result.passed()},
                    {"failures", result.failures}};
    for (const auto& [k, v] : result.summary.items()) summary[k] = v;
    result.summary = summary;
    write_json(ctx.file("summary.json"), summary);
    return result;
}

}  // namespace shaping

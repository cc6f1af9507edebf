#include "photon_shaping/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "photon_shaping/errors.hpp"

namespace shaping {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json matrix_json(const Eigen::MatrixXcd& m) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json r = Json::array(), c = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            r.push_back(m(i, j).real());
            c.push_back(m(i, j).imag());
        }
        re.push_back(r);
        im.push_back(c);
    }
    return {{"re", re}, {"im", im}};
}

Json point_json(const SweepPoint& p) {
    return {{"duration_ns", p.duration}, {"amplitude_GHz", p.amplitude}, {"s", p.s},
            {"efficiency", p.efficiency}, {"residual_f0", p.residual_f0}};
}

Json scan_json(const StarkScan& s) {
    return {{"amplitude_GHz", s.amplitude}, {"resonance_GHz", s.resonance}, {"shift_GHz", s.shift},
            {"detuning_GHz", s.detunings}, {"P_f", s.p_f}};
}

}  // namespace

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_envelope_csv(const std::filesystem::path& path, const Envelope& env) {
    auto out = open_out(path);
    out << "t_ns,re_Omega_GHz,im_Omega_GHz\n";
    for (std::size_t i = 0; i < env.size(); ++i) {
        out << format_number(env.time(i)) << ',' << format_number(env.samples()[i].real()) << ','
            << format_number(env.samples()[i].imag()) << '\n';
    }
}

Envelope read_envelope_csv(const std::filesystem::path& path, double ceiling) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    if (line.rfind("t_ns", 0) != 0) throw EnvelopeError(path.string() + ": missing t_ns header");
    std::vector<double> t;
    std::vector<cplx> s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double a = 0, b = 0, c = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3) {
            throw EnvelopeError(path.string() + ": malformed row '" + line + "'");
        }
        t.push_back(a);
        s.emplace_back(b, c);
    }
    if (t.size() < 2) throw EnvelopeError(path.string() + ": need at least two samples");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs(t[i] - t[i - 1] - dt) > 1e-6 * dt) throw EnvelopeError(path.string() + ": non-uniform time grid");
    }
    return Envelope(dt, t.front(), std::move(s), ceiling);
}

void write_record_csv(const std::filesystem::path& path, const OutputRecord& record) {
    auto out = open_out(path);
    out << "t_ns,re_aout,im_aout,power,P_g0,P_e0,P_f0,P_g1\n";
    const CompositeBasis& b = record.basis;
    const int cols[] = {b.index(0, 0), b.index(1, 0), b.index(2, 0), b.index(0, 1)};
    for (std::size_t i = 0; i < record.size(); ++i) {
        out << format_number(record.times[i]) << ',' << format_number(record.a_out[i].real()) << ','
            << format_number(record.a_out[i].imag()) << ',' << format_number(record.power[i]);
        for (int c : cols) out << ',' << format_number(record.populations(static_cast<Eigen::Index>(i), c));
        out << '\n';
    }
}

void write_mode_csv(const std::filesystem::path& path, const ModeFunction& mode) {
    auto out = open_out(path);
    out << "t_ns,re_psi,im_psi\n";
    for (std::size_t i = 0; i < mode.times.size(); ++i) {
        out << format_number(mode.times[i]) << ',' << format_number(mode.psi[i].real()) << ','
            << format_number(mode.psi[i].imag()) << '\n';
    }
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
    auto out = open_out(path);
    out << "nu_GHz,magnitude\n";
    for (std::size_t i = 0; i < spectrum.frequency.size(); ++i) {
        out << format_number(spectrum.frequency[i]) << ',' << format_number(spectrum.magnitude[i]) << '\n';
    }
}

void write_histogram_csv(const std::filesystem::path& path, const Histogram2D& hist) {
    auto out = open_out(path);
    out << "re,im,count\n";
    for (int i = 0; i < hist.bins(); ++i) {
        for (int j = 0; j < hist.bins(); ++j) {
            if (const auto n = hist.count(i, j); n > 0) {
                out << format_number(hist.centre(i)) << ',' << format_number(hist.centre(j)) << ',' << n << '\n';
            }
        }
    }
}

Json to_json(const DeviceParams& p) {
    Json j = {{"omega_q", p.omega_q}, {"omega_r", p.omega_r}, {"g", p.g},       {"alpha", p.alpha},
              {"kappa", p.kappa},     {"t1_e", p.t1_e},       {"t1_f", p.t1_f}, {"t2_ge", p.t2_ge},
              {"t2_ef", p.t2_ef},     {"t2_gf", p.t2_gf},     {"n_transmon", p.n_transmon},
              {"n_resonator", p.n_resonator}, {"model", to_string(p.model)}};
    if (p.e_c) j["e_c"] = *p.e_c;
    if (p.e_j) j["e_j"] = *p.e_j;
    if (p.model == TransmonModel::charge) j["n_g"] = p.n_g;
    return j;
}

Json to_json(const StarkMap& map) {
    return {{"amplitude_GHz", map.amplitudes()}, {"shift_GHz", map.shifts()}};
}

StarkMap stark_map_from_json(const Json& j) {
    try {
        return StarkMap(j.at("amplitude_GHz").get<std::vector<double>>(), j.at("shift_GHz").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("stark_map", e.what());
    }
}

Json to_json(const SweepResult& sweep) {
    Json grid = Json::array(), refine = Json::array();
    for (const auto& p : sweep.grid) grid.push_back(point_json(p));
    for (const auto& p : sweep.refinements) refine.push_back(point_json(p));
    return {{"durations_ns", sweep.durations}, {"amplitudes_GHz", sweep.amplitudes},
            {"grid", grid}, {"refinements", refine}, {"best", point_json(sweep.best)}};
}

Json to_json(const StarkCalibration& cal) {
    Json scans = Json::array(), refs = Json::array();
    for (const auto& s : cal.scans) scans.push_back(scan_json(s));
    for (const auto& s : cal.reference_scans) refs.push_back(scan_json(s));
    return {{"zero_offset_GHz", cal.zero_offset}, {"stark_map", to_json(cal.map)}, {"scans", scans},
            {"reference_scans", refs}};
}

Json to_json(const FrequencyCalibration& cal) {
    return {{"offset_GHz", cal.offsets}, {"peak_GHz", cal.peaks}, {"s", cal.symmetries},
            {"correction_GHz", cal.correction}, {"monotone", cal.monotone}};
}

Json to_json(const ResetResult& r) {
    return {{"initial_P_e", r.initial_p_e}, {"P_e_after_round", r.p_e_after_round}, {"final_P_e", r.final_p_e},
            {"final_P_f", r.final_p_f}, {"duration_ns", r.duration}};
}

Json to_json(const MomentSet& m) {
    Json entries = Json::array();
    for (int n = 0; n <= m.max_order; ++n) {
        for (int k = 0; n + k <= m.max_order; ++k) {
            entries.push_back({{"n", n}, {"m", k}, {"value", complex_json(m.value(n, k))}, {"error", m.error(n, k)}});
        }
    }
    return {{"max_order", m.max_order}, {"shots", m.shots}, {"seed", m.seed}, {"moments", entries}};
}

Json to_json(const G2Estimate& g) { return {{"value", g.value}, {"error", g.error}}; }

Json to_json(const DensityMatrixEstimate& e) {
    Json j = {{"n_max", e.n_max}, {"fidelity", e.fidelity}, {"residual", e.residual},
              {"iterations", e.iterations}, {"converged", e.converged}, {"rho", matrix_json(e.rho)}};
    j["g2"] = e.g2 ? to_json(*e.g2) : Json(nullptr);
    return j;
}

void write_json(const std::filesystem::path& path, const Json& j) {
    Json out = {{"schema_version", schema_version}};
    for (const auto& [k, v] : j.items()) {
        if (k != "schema_version") out[k] = v;
    }
    auto f = open_out(path);
    f << out.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string(), e.what());
    }
}

}  // namespace shaping

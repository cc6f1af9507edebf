#include "photon_shaping/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "photon_shaping/errors.hpp"

namespace shaping {
namespace {

enum class Dim { none, frequency, time };

const std::map<std::string, double>& frequency_units() {
    static const std::map<std::string, double> u{{"Hz", 1e-9}, {"kHz", 1e-6}, {"MHz", 1e-3}, {"GHz", 1.0}};
    return u;
}

const std::map<std::string, double>& time_units() {
    static const std::map<std::string, double> u{
        {"ps", 1e-3}, {"ns", 1.0}, {"us", 1e3}, {"\xC2\xB5s", 1e3}, {"ms", 1e6}, {"s", 1e9}};
    return u;
}

double parse_with_unit(const std::string& text, const std::string& field, Dim dim) {
    std::size_t pos = 0;
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    double value = 0.0;
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) throw ConfigError(field, "expected a number, got '" + text + "'");
    std::string unit(ptr, end);
    unit.erase(0, unit.find_first_not_of(" \t"));
    unit.erase(unit.find_last_not_of(" \t") + 1);
    if (unit.empty()) return value;

    const auto& f = frequency_units();
    const auto& t = time_units();
    if (dim == Dim::frequency && f.count(unit)) return value * f.at(unit);
    if (dim == Dim::time && t.count(unit)) return value * t.at(unit);
    const char* want = dim == Dim::frequency ? "a frequency" : dim == Dim::time ? "a time" : "a dimensionless number";
    throw ConfigError(field, "unit violation: '" + unit + "' where " + std::string(want) + " is expected");
}

// Walks one mapping, remembering which keys were consumed.
class Section {
public:
    Section(const YAML::Node& node, std::string path)
        : node_(node), path_(std::move(path)), present_(node.IsDefined() && !node.IsNull()) {
        if (present_ && !node_.IsMap()) throw ConfigError(path_, "expected a mapping");
    }

    bool has(const std::string& key) const { return present_ && node_[key]; }
    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    Section child(const std::string& key) {
        seen_.insert(key);
        return Section(has(key) ? node_[key] : YAML::Node(YAML::NodeType::Null), field(key));
    }

    std::string scalar(const std::string& key) {
        seen_.insert(key);
        const YAML::Node n = node_[key];
        if (!n.IsScalar()) throw ConfigError(field(key), "expected a scalar");
        return n.Scalar();
    }

    void number(const std::string& key, double& out, Dim dim = Dim::none, bool required = false) {
        if (!has(key)) {
            if (required) throw ConfigError(field(key), "required field is missing");
            seen_.insert(key);
            return;
        }
        out = parse_with_unit(scalar(key), field(key), dim);
    }

    void number(const std::string& key, std::optional<double>& out, Dim dim) {
        if (!has(key)) return seen(key);
        out = parse_with_unit(scalar(key), field(key), dim);
    }

    template <class Int>
    void integer(const std::string& key, Int& out) {
        if (!has(key)) return seen(key);
        const std::string s = scalar(key);
        Int v{};
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(field(key), "expected an integer, got '" + s + "'");
        out = v;
    }

    void boolean(const std::string& key, bool& out) {
        if (!has(key)) return seen(key);
        const std::string s = scalar(key);
        if (s == "true") out = true;
        else if (s == "false") out = false;
        else throw ConfigError(field(key), "expected true or false, got '" + s + "'");
    }

    void string(const std::string& key, std::string& out) {
        if (!has(key)) return seen(key);
        out = scalar(key);
    }

    void list(const std::string& key, std::vector<double>& out, Dim dim) {
        seen_.insert(key);
        if (!has(key)) return;
        const YAML::Node n = node_[key];
        if (!n.IsSequence()) throw ConfigError(field(key), "expected a list");
        out.clear();
        for (std::size_t i = 0; i < n.size(); ++i) {
            const std::string f = field(key) + "[" + std::to_string(i) + "]";
            if (!n[i].IsScalar()) throw ConfigError(f, "expected a scalar");
            out.push_back(parse_with_unit(n[i].Scalar(), f, dim));
        }
    }

    void finish() const {
        if (!present_) return;
        for (const auto& kv : node_) {
            const std::string key = kv.first.as<std::string>();
            if (!seen_.count(key)) throw ConfigError(field(key), "unknown key");
        }
    }

private:
    void seen(const std::string& key) { seen_.insert(key); }

    YAML::Node node_;
    std::string path_;
    bool present_;
    std::set<std::string> seen_;
};

void positive(double v, const std::string& field) {
    if (!(v > 0.0)) throw ConfigError(field, "must be positive");
}

ScenarioConfig from_node(const YAML::Node& root) {
    ScenarioConfig c;
    Section top(root, "");
    if (!top.has("device")) throw ConfigError("device", "required section is missing");

    {
        Section d = top.child("device");
        DeviceParams& p = c.device;
        d.number("omega_q", p.omega_q, Dim::frequency, true);
        d.number("omega_r", p.omega_r, Dim::frequency, true);
        d.number("g", p.g, Dim::frequency, true);
        d.number("alpha", p.alpha, Dim::frequency, true);
        d.number("kappa", p.kappa, Dim::frequency, true);
        d.number("t1_e", p.t1_e, Dim::time, true);
        d.number("t1_f", p.t1_f, Dim::time, true);
        d.number("t2_ge", p.t2_ge, Dim::time, true);
        d.number("t2_ef", p.t2_ef, Dim::time);
        d.number("t2_gf", p.t2_gf, Dim::time, true);
        d.integer("n_transmon", p.n_transmon);
        d.integer("n_resonator", p.n_resonator);
        std::string model = to_string(p.model);
        d.string("model", model);
        if (model == "kerr") p.model = TransmonModel::kerr;
        else if (model == "charge") p.model = TransmonModel::charge;
        else throw ConfigError(d.field("model"), "expected kerr or charge, got '" + model + "'");
        d.number("e_c", p.e_c, Dim::frequency);
        d.number("e_j", p.e_j, Dim::frequency);
        d.number("n_g", p.n_g);
        d.finish();
        try {
            p.validate();
        } catch (const ConfigError& e) {
            const std::string msg = e.what();
            const std::size_t k = msg.find(": ");
            throw ConfigError("device." + e.field(), k == std::string::npos ? msg : msg.substr(k + 2));
        }
    }

    top.string("scenario", c.scenario);
    top.integer("seed", c.seed);
    top.integer("threads", c.threads);
    if (c.threads < 1) throw ConfigError("threads", "must be at least 1");
    top.string("output", c.output);

    {
        Section s = top.child("simulation");
        s.number("dt", c.simulation.dt, Dim::time);
        s.number("stride", c.simulation.stride, Dim::time);
        s.number("tail_kappa", c.simulation.tail_kappa);
        Section d = s.child("decoherence");
        d.boolean("resonator_decay", c.simulation.decoherence.resonator_decay);
        d.boolean("relaxation", c.simulation.decoherence.relaxation);
        d.boolean("dephasing", c.simulation.decoherence.dephasing);
        d.finish();
        s.finish();
        positive(c.simulation.dt, "simulation.dt");
        positive(c.simulation.stride, "simulation.stride");
        if (c.simulation.tail_kappa < 0.0) throw ConfigError("simulation.tail_kappa", "must be non-negative");
    }
    {
        Section s = top.child("pulse");
        s.number("amplitude", c.pulse.amplitude, Dim::frequency);
        s.number("duration", c.pulse.duration, Dim::time);
        s.boolean("compensate", c.pulse.compensate);
        s.number("drive_offset", c.pulse.drive_offset, Dim::frequency);
        std::string initial = c.pulse.initial == InitialState::f0 ? "f0" : "superposition";
        s.string("initial", initial);
        if (initial == "f0") c.pulse.initial = InitialState::f0;
        else if (initial == "superposition") c.pulse.initial = InitialState::g0_plus_f0;
        else throw ConfigError("pulse.initial", "expected f0 or superposition, got '" + initial + "'");
        s.string("envelope_csv", c.pulse.envelope_csv);
        s.finish();
        positive(c.pulse.duration, "pulse.duration");
        if (c.pulse.amplitude < 0.0) throw ConfigError("pulse.amplitude", "must be non-negative");
    }
    {
        Section s = top.child("sweep");
        s.list("durations", c.sweep.durations, Dim::time);
        s.list("amplitudes", c.sweep.amplitudes, Dim::frequency);
        s.integer("refine_rounds", c.sweep.refine_rounds);
        s.number("min_efficiency", c.sweep.min_efficiency);
        s.finish();
        if (c.sweep.min_efficiency < 0.0 || c.sweep.min_efficiency > 1.0) {
            throw ConfigError("sweep.min_efficiency", "must lie in [0, 1]");
        }
        for (double t : c.sweep.durations) {
            if (t < 20.0 || t > 1000.0) throw ConfigError("sweep.durations", "durations must lie in [20, 1000] ns");
        }
        for (double a : c.sweep.amplitudes) {
            if (!(a > 0.0) || a > 1.0) throw ConfigError("sweep.amplitudes", "amplitudes must lie in (0, 1] GHz");
        }
    }
    {
        Section s = top.child("stark");
        s.list("amplitudes", c.stark.amplitudes, Dim::frequency);
        s.list("reference_amplitudes", c.stark.reference_amplitudes, Dim::frequency);
        s.number("pulse_length", c.stark.pulse_length, Dim::time);
        s.number("rise", c.stark.rise, Dim::time);
        s.finish();
        positive(c.stark.pulse_length, "stark.pulse_length");
    }
    {
        Section s = top.child("frequency");
        s.list("offsets", c.frequency.offsets, Dim::frequency);
        s.finish();
    }
    {
        Section s = top.child("reset");
        s.number("thermal_p_e", c.reset.thermal_p_e);
        s.integer("rounds", c.reset.rounds);
        s.number("transfer_amplitude", c.reset.transfer_amplitude, Dim::frequency);
        s.number("transfer_duration", c.reset.transfer_duration, Dim::time);
        s.number("wait_kappa", c.reset.wait_kappa);
        s.finish();
        if (c.reset.thermal_p_e < 0.0 || c.reset.thermal_p_e > 0.5) {
            throw ConfigError("reset.thermal_p_e", "must lie in [0, 0.5]");
        }
        if (c.reset.rounds < 0) throw ConfigError("reset.rounds", "must be non-negative");
    }
    {
        Section s = top.child("tomography");
        s.integer("shots", c.tomography.shots);
        s.number("noise_number", c.tomography.noise_number);
        s.integer("n_max", c.tomography.n_max);
        s.integer("max_order", c.tomography.max_order);
        s.number("amplitude", c.tomography.amplitude, Dim::frequency);
        s.number("duration", c.tomography.duration, Dim::time);
        s.finish();
        if (c.tomography.shots == 0) throw ConfigError("tomography.shots", "must be positive");
        if (c.tomography.noise_number < 0.0) throw ConfigError("tomography.noise_number", "must be non-negative");
        if (c.tomography.n_max < 2) throw ConfigError("tomography.n_max", "must be at least 2");
        if (c.tomography.max_order < 4) throw ConfigError("tomography.max_order", "must be at least 4");
    }
    top.finish();
    return c;
}

}  // namespace

EmissionOptions ScenarioConfig::emission_options() const {
    EmissionOptions e;
    e.decoherence = simulation.decoherence;
    e.propagate = propagate_options();
    e.drive_offset = pulse.drive_offset;
    e.tail_kappa = simulation.tail_kappa;
    return e;
}

PropagateOptions ScenarioConfig::propagate_options() const {
    PropagateOptions p;
    p.dt = simulation.dt;
    p.stride = simulation.stride;
    return p;
}

double parse_frequency(const std::string& text, const std::string& field) {
    return parse_with_unit(text, field, Dim::frequency);
}

double parse_time(const std::string& text, const std::string& field) {
    return parse_with_unit(text, field, Dim::time);
}

ScenarioConfig parse_config_string(const std::string& yaml, const std::string& source) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml);
    } catch (const YAML::Exception& e) {
        throw ConfigError(source, e.what());
    }
    if (!root.IsMap()) throw ConfigError(source, "expected a mapping at the top level");
    return from_node(root);
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str(), path.string());
}

std::string echo_config(const ScenarioConfig& c) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    auto list = [&](const char* key, const std::vector<double>& v) {
        out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (double x : v) out << x;
        out << YAML::EndSeq;
    };
    const DeviceParams& p = c.device;
    out << YAML::BeginMap;
    out << YAML::Key << "device" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "omega_q" << YAML::Value << p.omega_q;
    out << YAML::Key << "omega_r" << YAML::Value << p.omega_r;
    out << YAML::Key << "g" << YAML::Value << p.g;
    out << YAML::Key << "alpha" << YAML::Value << p.alpha;
    out << YAML::Key << "kappa" << YAML::Value << p.kappa;
    out << YAML::Key << "t1_e" << YAML::Value << p.t1_e;
    out << YAML::Key << "t1_f" << YAML::Value << p.t1_f;
    out << YAML::Key << "t2_ge" << YAML::Value << p.t2_ge;
    out << YAML::Key << "t2_ef" << YAML::Value << p.t2_ef;
    out << YAML::Key << "t2_gf" << YAML::Value << p.t2_gf;
    out << YAML::Key << "n_transmon" << YAML::Value << p.n_transmon;
    out << YAML::Key << "n_resonator" << YAML::Value << p.n_resonator;
    out << YAML::Key << "model" << YAML::Value << to_string(p.model);
    if (p.e_c) out << YAML::Key << "e_c" << YAML::Value << *p.e_c;
    if (p.e_j) out << YAML::Key << "e_j" << YAML::Value << *p.e_j;
    out << YAML::Key << "n_g" << YAML::Value << p.n_g;
    out << YAML::EndMap;

    out << YAML::Key << "scenario" << YAML::Value << YAML::DoubleQuoted << c.scenario;
    out << YAML::Key << "seed" << YAML::Value << c.seed;
    out << YAML::Key << "threads" << YAML::Value << c.threads;
    out << YAML::Key << "output" << YAML::Value << YAML::DoubleQuoted << c.output;

    out << YAML::Key << "simulation" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "dt" << YAML::Value << c.simulation.dt;
    out << YAML::Key << "stride" << YAML::Value << c.simulation.stride;
    out << YAML::Key << "tail_kappa" << YAML::Value << c.simulation.tail_kappa;
    out << YAML::Key << "decoherence" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "resonator_decay" << YAML::Value << c.simulation.decoherence.resonator_decay;
    out << YAML::Key << "relaxation" << YAML::Value << c.simulation.decoherence.relaxation;
    out << YAML::Key << "dephasing" << YAML::Value << c.simulation.decoherence.dephasing;
    out << YAML::EndMap << YAML::EndMap;

    out << YAML::Key << "pulse" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "amplitude" << YAML::Value << c.pulse.amplitude;
    out << YAML::Key << "duration" << YAML::Value << c.pulse.duration;
    out << YAML::Key << "compensate" << YAML::Value << c.pulse.compensate;
    out << YAML::Key << "drive_offset" << YAML::Value << c.pulse.drive_offset;
    out << YAML::Key << "initial" << YAML::Value << (c.pulse.initial == InitialState::f0 ? "f0" : "superposition");
    out << YAML::Key << "envelope_csv" << YAML::Value << YAML::DoubleQuoted << c.pulse.envelope_csv;
    out << YAML::EndMap;

    out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    list("durations", c.sweep.durations);
    list("amplitudes", c.sweep.amplitudes);
    out << YAML::Key << "refine_rounds" << YAML::Value << c.sweep.refine_rounds;
    out << YAML::Key << "min_efficiency" << YAML::Value << c.sweep.min_efficiency;
    out << YAML::EndMap;

    out << YAML::Key << "stark" << YAML::Value << YAML::BeginMap;
    list("amplitudes", c.stark.amplitudes);
    list("reference_amplitudes", c.stark.reference_amplitudes);
    out << YAML::Key << "pulse_length" << YAML::Value << c.stark.pulse_length;
    out << YAML::Key << "rise" << YAML::Value << c.stark.rise;
    out << YAML::EndMap;

    out << YAML::Key << "frequency" << YAML::Value << YAML::BeginMap;
    list("offsets", c.frequency.offsets);
    out << YAML::EndMap;

    out << YAML::Key << "reset" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "thermal_p_e" << YAML::Value << c.reset.thermal_p_e;
    out << YAML::Key << "rounds" << YAML::Value << c.reset.rounds;
    out << YAML::Key << "transfer_amplitude" << YAML::Value << c.reset.transfer_amplitude;
    out << YAML::Key << "transfer_duration" << YAML::Value << c.reset.transfer_duration;
    out << YAML::Key << "wait_kappa" << YAML::Value << c.reset.wait_kappa;
    out << YAML::EndMap;

    out << YAML::Key << "tomography" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "shots" << YAML::Value << c.tomography.shots;
    out << YAML::Key << "noise_number" << YAML::Value << c.tomography.noise_number;
    out << YAML::Key << "n_max" << YAML::Value << c.tomography.n_max;
    out << YAML::Key << "max_order" << YAML::Value << c.tomography.max_order;
    out << YAML::Key << "amplitude" << YAML::Value << c.tomography.amplitude;
    out << YAML::Key << "duration" << YAML::Value << c.tomography.duration;
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace shaping

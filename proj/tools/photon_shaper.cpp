// photon-shaper: command-line front end for the simulator and its scenarios.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "photon_shaping/errors.hpp"
#include "photon_shaping/scenarios.hpp"

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<int> threads;
    std::optional<double> dt;
    std::string stark_map;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "YAML configuration file")->required()->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "random seed (overrides the config)");
    app->add_option("--out", c.out, "output directory (default: out/<scenario>)");
    app->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    app->add_option("--dt", c.dt, "integrator step in ns (overrides the config)")->check(CLI::PositiveNumber);
    app->add_option("--stark-map", c.stark_map, "Stark map JSON used for phase compensation")
        ->check(CLI::ExistingFile);
}

int run(const std::string& scenario, const Common& c) {
    shaping::ScenarioConfig cfg = shaping::parse_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    if (c.threads) cfg.threads = *c.threads;
    if (c.dt) cfg.simulation.dt = *c.dt;
    std::string out = c.out;
    if (out.empty()) out = cfg.output.empty() ? "out/" + scenario : cfg.output;

    std::optional<shaping::StarkMap> stark;
    if (!c.stark_map.empty()) stark = shaping::stark_map_from_json(shaping::read_json(c.stark_map));

    const auto result = shaping::run_scenario(scenario, cfg, out, stark ? &*stark : nullptr);
    std::cout << result.summary.dump(2) << '\n';
    for (const auto& f : result.failures) std::cerr << "assertion failed: " << f << '\n';
    return result.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shaped single-photon emission from a driven transmon-resonator system"};
    app.require_subcommand(1);

    struct Sub {
        const char* command;
        const char* scenario;
        const char* help;
    };
    const Sub subs[] = {
        {"simulate", "simulate", "emit one photon with the configured pulse"},
        {"sweep-symmetry", "fig-a2-sweep", "symmetry sweep over pulse length and amplitude"},
        {"calibrate-stark", "fig-a2-stark", "Stark-shift calibration with flat-top pulses"},
        {"calibrate-frequency", "fig-a2-frequency", "drive-frequency calibration from the photon spectrum"},
        {"reset", "reset", "thermal excited-state reset"},
        {"tomography", "fig3-tomography", "heterodyne tomography of Fock and superposition photons"},
    };
    std::vector<Common> commons(std::size(subs) + 1);
    std::string scenario_name;
    std::string selected;
    std::size_t i = 0;
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.command, s.help);
        add_common(sub, commons[i]);
        sub->callback([&selected, &s] { selected = s.scenario; });
        ++i;
    }
    auto* sc = app.add_subcommand("scenario", "run a named scenario");
    sc->add_option("name", scenario_name, "scenario name")
        ->required()
        ->check(CLI::IsMember(shaping::scenario_names()));
    add_common(sc, commons.back());
    sc->callback([&] { selected = scenario_name; });

    CLI11_PARSE(app, argc, argv);

    std::size_t idx = commons.size() - 1;
    for (std::size_t k = 0; k < std::size(subs); ++k) {
        if (app.got_subcommand(subs[k].command)) idx = k;
    }
    try {
        return run(selected, commons[idx]);
    } catch (const shaping::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

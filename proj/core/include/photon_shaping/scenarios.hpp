#pragma once

// End-to-end pipelines. Each writes its artifacts (config echo, CSV series,
// summary.json) into one output directory and reports internal assertions.

#include <filesystem>
#include <string>
#include <vector>

#include "photon_shaping/config.hpp"
#include "photon_shaping/io.hpp"

namespace shaping {

struct ScenarioResult {
    std::string name;
    Json summary;
    std::vector<std::string> failures;  ///< failed internal assertions
    std::vector<std::filesystem::path> files;

    bool passed() const { return failures.empty(); }
};

/// simulate, fig2-symmetric, fig3-tomography, fig4-train, fig-a2-sweep,
/// fig-a2-stark, fig-a2-frequency, reset
std::vector<std::string> scenario_names();

/// `stark` overrides the dressed-spectrum map used for phase compensation.
ScenarioResult run_scenario(const std::string& name, const ScenarioConfig& config,
                            const std::filesystem::path& out_dir, const StarkMap* stark = nullptr);

/// Configured pulse: CSV envelope or sin², compensated when requested.
Envelope configured_pulse(const ScenarioConfig& config, const StarkMap& stark);

/// Photon-mode density matrix (Fock basis, dimension 2) from an emission
/// record: populations from ∫power, coherence from the matched filter.
Eigen::MatrixXcd photon_state(const OutputRecord& record);

}  // namespace shaping

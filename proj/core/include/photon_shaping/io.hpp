#pragma once

// CSV series and JSON artifacts. Numbers are written with 17 significant
// digits so files round-trip and reruns are byte-identical.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "photon_shaping/analysis.hpp"
#include "photon_shaping/calibration.hpp"
#include "photon_shaping/mle.hpp"
#include "photon_shaping/tomography.hpp"

namespace shaping {

inline constexpr int schema_version = 1;

using Json = nlohmann::ordered_json;

/// t_ns, re_Omega_GHz, im_Omega_GHz
void write_envelope_csv(const std::filesystem::path& path, const Envelope& env);
/// Reads the format above; the grid must be uniform.
Envelope read_envelope_csv(const std::filesystem::path& path, double ceiling = default_awg_ceiling);

/// t_ns, re_aout, im_aout, power, P_g0, P_e0, P_f0, P_g1
void write_record_csv(const std::filesystem::path& path, const OutputRecord& record);
/// t_ns, re_psi, im_psi
void write_mode_csv(const std::filesystem::path& path, const ModeFunction& mode);
/// nu_GHz, magnitude
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);
/// re, im, count (non-empty bins only)
void write_histogram_csv(const std::filesystem::path& path, const Histogram2D& hist);

Json to_json(const DeviceParams& params);
Json to_json(const StarkMap& map);
StarkMap stark_map_from_json(const Json& j);
Json to_json(const SweepResult& sweep);
Json to_json(const StarkCalibration& cal);
Json to_json(const FrequencyCalibration& cal);
Json to_json(const ResetResult& reset);
Json to_json(const MomentSet& moments);
Json to_json(const DensityMatrixEstimate& estimate);
Json to_json(const G2Estimate& g2);

/// Writes j with "schema_version" first.
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

/// %.17g
std::string format_number(double x);

}  // namespace shaping

#pragma once

// Photon mode functions, symmetry, spectra and matched filtering.

#include <vector>

#include "photon_shaping/dynamics.hpp"

namespace shaping {

enum class ModeSource { mean_field, power };

/// ψ(t) on a uniform grid (ns^-1/2).
struct ModeFunction {
    std::vector<double> times;
    std::vector<cplx> psi;
    bool normalized = false;

    double dt() const;
    /// ∫|ψ|² dt (trapezoid).
    double norm_squared() const;
};

ModeFunction normalize(ModeFunction mode);

/// mean_field: ψ ∝ ⟨a_out⟩. power: ψ = √power, i.e. |ψ|² only.
ModeFunction mode_function(const OutputRecord& record, ModeSource source = ModeSource::mean_field);

struct SymmetryReport {
    double s = 0.0;
    double t0_opt = 0.0;  ///< ns
};

/// s = max_t0 |∫ψ*(2t0 − t) ψ(t) dt| / ∫|ψ|² dt.
SymmetryReport symmetry(const ModeFunction& mode, double t0_tol = 0.01);

struct Spectrum {
    std::vector<double> frequency;  ///< GHz, relative to the output frame
    std::vector<double> magnitude;
    double peak_frequency = 0.0;    ///< GHz, quadratic interpolation around the maximum bin
    double resolution = 0.0;        ///< bin spacing (GHz)
};

/// S(ν) = ∫ψ(t) e^{−i2πνt} dt with zero padding by `pad` (rounded to a power of two).
Spectrum fourier_spectrum(const ModeFunction& mode, int pad = 8);

/// ∫ψ*(t) v(t) dt; v is linearly resampled onto the mode grid when the grids differ.
cplx matched_filter(const ModeFunction& mode, const std::vector<double>& times, const std::vector<cplx>& values);
/// ⟨A⟩ = ∫ψ*⟨a_out⟩ dt.
cplx matched_filter(const ModeFunction& mode, const OutputRecord& record);

/// Power-weighted circular standard deviation of arg ψ (rad).
double phase_std(const ModeFunction& mode);

}  // namespace shaping

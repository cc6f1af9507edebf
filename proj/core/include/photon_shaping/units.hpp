#pragma once

#include <complex>
#include <numbers>

namespace shaping {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Ordinary frequency (GHz) to angular frequency (rad/ns).
constexpr double angular(double ghz) { return two_pi * ghz; }
inline cplx angular(cplx ghz) { return two_pi * ghz; }

/// Angular frequency (rad/ns) to ordinary frequency (GHz).
constexpr double ordinary(double rad_per_ns) { return rad_per_ns / two_pi; }

}  // namespace shaping

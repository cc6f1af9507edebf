#pragma once

#include <Eigen/Dense>

#include <vector>

namespace shaping {

/// Transmon diagonalized in the charge basis, H = 4E_C(n̂ − n_g)² − E_J cos φ̂.
struct ChargeBasisResult {
    std::vector<double> energies;  ///< lowest levels relative to ground (GHz)
    /// Charge matrix elements ⟨j|n̂|k⟩ divided by ⟨0|n̂|1⟩, signs fixed so
    /// that the first off-diagonal is positive (ladder convention √k for a
    /// harmonic transmon).
    Eigen::MatrixXd charge_elements;
    int cutoff = 0;  ///< charge states −cutoff…cutoff
};

ChargeBasisResult transmon_charge_basis(double e_c, double e_j, double n_g, int n_levels,
                                        int min_cutoff = 15);

/// E_J (GHz) giving the requested g→e frequency at the given E_C and n_g.
double tune_josephson_energy(double e_c, double omega_ge, double n_g = 0.0);

}  // namespace shaping

#pragma once

// Heterodyne detection chain emulation and moment-based reconstruction.
//
// The recorded complex amplitude is V = A + h†, with A the photon mode and h a
// thermal noise mode of occupation N.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "photon_shaping/units.hpp"

namespace shaping {

struct NoiseModel {
    double n = 10.0;  ///< thermal occupation of the noise mode
};

/// Square histogram over the complex plane; bin (i, j) covers
/// re ∈ [-extent + i·w, -extent + (i+1)·w), im likewise with j.
class Histogram2D {
public:
    Histogram2D() = default;
    Histogram2D(double extent, int bins);

    double extent() const { return extent_; }
    int bins() const { return bins_; }
    double bin_width() const { return 2.0 * extent_ / bins_; }
    double centre(int k) const { return -extent_ + (k + 0.5) * bin_width(); }
    std::uint64_t count(int i, int j) const { return counts_[static_cast<std::size_t>(i) * bins_ + j]; }
    std::uint64_t& count(int i, int j) { return counts_[static_cast<std::size_t>(i) * bins_ + j]; }
    std::uint64_t shots() const { return shots_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }

    void add(int i, int j, std::uint64_t n = 1);
    /// Adds counts; grids must match.
    void merge(const Histogram2D& other);

private:
    double extent_ = 0.0;
    int bins_ = 0;
    std::vector<std::uint64_t> counts_;
    std::uint64_t shots_ = 0;
};

/// Probability density of V = A + h† for a photon-mode density matrix ρ (Fock basis).
double shot_density(const Eigen::MatrixXcd& rho, const NoiseModel& noise, cplx v);

struct ShotOptions {
    std::uint64_t seed = 0;
    int threads = 1;
    int streams = 64;            ///< independent random streams; results do not depend on threads
    double resolution = 0.1;     ///< maximum bin width
    double outside_tol = 1e-4;   ///< probability allowed outside the grid
};

Histogram2D simulate_shots(const Eigen::MatrixXcd& rho_signal, const NoiseModel& noise, std::uint64_t n_shots,
                           const ShotOptions& options);

/// value(n, m) = ⟨(X†)^n X^m⟩ for n + m ≤ max_order.
struct MomentSet {
    int max_order = 4;
    Eigen::MatrixXcd value;
    Eigen::MatrixXd error;  ///< standard error per moment
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    MomentSet() = default;
    explicit MomentSet(int order);
    cplx operator()(int n, int m) const { return value(n, m); }
    bool defined(int n, int m) const { return n >= 0 && m >= 0 && n + m <= max_order; }
};

MomentSet moments_from_histogram(const Histogram2D& hist, int max_order = 4);

/// Exact moments of a Fock-basis density matrix: Tr(ρ (a†)^n a^m).
MomentSet moments_of_state(const Eigen::MatrixXcd& rho, int max_order = 4);

/// Thermal noise table ⟨h^p (h†)^q⟩ = δ_pq p! (N+1)^p.
MomentSet thermal_noise_moments(double n, int max_order = 4);

/// Forward map from signal and noise moments to recorded-V moments.
MomentSet convolve_moments(const MomentSet& signal, const MomentSet& noise);

/// N estimated from a vacuum-input reference: ⟨V†V⟩ − 1.
double estimate_noise_number(const MomentSet& reference);

/// Recover ⟨(A†)^i A^j⟩ from recorded moments and the vacuum reference.
/// The noise table is the thermal model at the estimated N; the reference is
/// checked against that model (warning above 5 standard errors).
MomentSet deconvolve_moments(const MomentSet& v_moments, const MomentSet& noise_reference);

/// Inversion with an explicit noise table ⟨h^p (h†)^q⟩.
MomentSet deconvolve_with_noise_table(const MomentSet& v_moments, const MomentSet& noise_table);

struct G2Estimate {
    double value = 0.0;
    double error = 0.0;
};

/// ⟨A†A†AA⟩/⟨A†A⟩² with propagated standard error.
G2Estimate g2(const MomentSet& a_moments, double threshold = 0.05);

}  // namespace shaping

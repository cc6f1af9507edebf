#pragma once

// Density-matrix fit to field moments, ρ = L L† / Tr(L L†) with L lower triangular.

#include <optional>

#include <Eigen/Dense>

#include "photon_shaping/tomography.hpp"

namespace shaping {

/// Error-weighted least squares Σ w |Tr(ρ (a†)^i a^j) − m_ij|² over i ≤ j, 0 < i + j ≤ order.
class MleObjective {
public:
    MleObjective(const MomentSet& moments, int n_max, double error_floor = 1e-6);

    int dimension() const { return d_; }
    int parameters() const { return d_ * d_; }

    /// Parameter vector: real parts of the lower triangle (row-major), then
    /// imaginary parts of the strict lower triangle.
    Eigen::MatrixXcd cholesky_factor(const Eigen::VectorXd& x) const;
    Eigen::MatrixXcd density(const Eigen::VectorXd& x) const;
    Eigen::VectorXd parameters_from_factor(const Eigen::MatrixXcd& l) const;

    double value(const Eigen::VectorXd& x) const;
    double value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const;

private:
    struct Term {
        Eigen::MatrixXcd op;
        cplx target;
        double weight;
    };
    int d_;
    std::vector<Term> terms_;
};

struct MleOptions {
    int max_iterations = 2000;
    double gradient_tol = 1e-10;
    double error_floor = 1e-6;
};

struct DensityMatrixEstimate {
    int n_max = 3;
    Eigen::MatrixXcd rho;
    double fidelity = 0.0;
    std::optional<G2Estimate> g2;
    double residual = 0.0;   ///< final objective value
    int iterations = 0;
    bool converged = false;
};

/// Fit and report the fidelity ⟨target|ρ|target⟩ (target in the Fock basis, padded with zeros).
DensityMatrixEstimate mle_density_matrix(const MomentSet& a_moments, int n_max, const Eigen::VectorXcd& target,
                                         const MleOptions& options = {});

}  // namespace shaping

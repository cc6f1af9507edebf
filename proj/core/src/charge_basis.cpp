#include "photon_shaping/charge_basis.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "photon_shaping/diagnostics.hpp"
#include "photon_shaping/errors.hpp"

namespace shaping {
namespace {

constexpr double truncation_tol = 1e-6;
constexpr int max_cutoff = 200;

struct Diagonalized {
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
};

Diagonalized diagonalize(double e_c, double e_j, double n_g, int cutoff) {
    const int dim = 2 * cutoff + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double n = i - cutoff;
        h(i, i) = 4.0 * e_c * (n - n_g) * (n - n_g);
        if (i + 1 < dim) {
            h(i, i + 1) = -0.5 * e_j;
            h(i + 1, i) = -0.5 * e_j;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace

ChargeBasisResult transmon_charge_basis(double e_c, double e_j, double n_g, int n_levels,
                                        int min_cutoff) {
    if (e_c <= 0.0 || e_j <= 0.0) throw Error("E_C and E_J must be positive");
    if (n_levels < 2) throw Error("need at least two transmon levels");
    if (e_j / e_c < 20.0) {
        warn("E_J/E_C = " + std::to_string(e_j / e_c) + " is outside the transmon regime");
    }

    int cutoff = std::max(min_cutoff, n_levels);
    Diagonalized d = diagonalize(e_c, e_j, n_g, cutoff);
    for (;;) {
        if (cutoff + 5 > max_cutoff) {
            throw TruncationError("charge basis did not converge below cutoff " +
                                  std::to_string(max_cutoff));
        }
        Diagonalized wider = diagonalize(e_c, e_j, n_g, cutoff + 5);
        double change = 0.0;
        for (int k = 0; k < n_levels; ++k) {
            const double a = d.energies(k) - d.energies(0);
            const double b = wider.energies(k) - wider.energies(0);
            change = std::max(change, std::abs(a - b));
        }
        if (change <= truncation_tol) break;
        cutoff += 5;
        d = std::move(wider);
    }

    ChargeBasisResult out;
    out.cutoff = cutoff;
    out.energies.resize(n_levels);
    for (int k = 0; k < n_levels; ++k) out.energies[k] = d.energies(k) - d.energies(0);

    const int dim = 2 * cutoff + 1;
    Eigen::VectorXd n_diag(dim);
    for (int i = 0; i < dim; ++i) n_diag(i) = i - cutoff;
    Eigen::MatrixXd v = d.vectors.leftCols(n_levels);
    // gauge: positive ⟨k−1|n̂|k⟩
    for (int k = 1; k < n_levels; ++k) {
        const double elem = v.col(k - 1).dot(n_diag.asDiagonal() * v.col(k));
        if (elem < 0.0) v.col(k) *= -1.0;
    }
    Eigen::MatrixXd n_mat = v.transpose() * n_diag.asDiagonal() * v;
    const double scale = n_mat(0, 1);
    if (std::abs(scale) < 1e-14) throw Error("vanishing g-e charge matrix element");
    out.charge_elements = n_mat / scale;
    return out;
}

double tune_josephson_energy(double e_c, double omega_ge, double n_g) {
    auto freq = [&](double e_j) {
        return transmon_charge_basis(e_c, e_j, n_g, 2).energies[1];
    };
    // Asymptotic guess ω ≈ √(8 E_J E_C) − E_C, then secant iteration.
    double x0 = (omega_ge + e_c) * (omega_ge + e_c) / (8.0 * e_c);
    double x1 = x0 * 1.01;
    double f0 = freq(x0) - omega_ge;
    double f1 = freq(x1) - omega_ge;
    for (int it = 0; it < 60 && std::abs(f1) > 1e-12; ++it) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = freq(x1) - omega_ge;
    }
    if (std::abs(f1) > 1e-9) throw Error("E_J tuning did not converge");
    return x1;
}

}  // namespace shaping

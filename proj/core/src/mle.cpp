#include "photon_shaping/mle.hpp"

#include <cmath>
#include <sstream>

#include "photon_shaping/diagnostics.hpp"
#include "photon_shaping/errors.hpp"

namespace shaping {

MleObjective::MleObjective(const MomentSet& moments, int n_max, double error_floor) : d_(n_max + 1) {
    if (n_max < 2) throw Error("MLE needs n_max >= 2");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d_, d_);
    for (int k = 1; k < d_; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Eigen::MatrixXcd ad = a.adjoint();
    Eigen::MatrixXcd adi = Eigen::MatrixXcd::Identity(d_, d_);
    for (int i = 0; i <= moments.max_order; ++i) {
        Eigen::MatrixXcd op = adi;
        for (int j = 0; i + j <= moments.max_order; ++j) {
            if (j >= i && i + j > 0) {
                const double e = std::max(moments.error(i, j), error_floor);
                terms_.push_back({op, moments.value(i, j), 1.0 / (e * e)});
            }
            op = op * a;
        }
        adi = adi * ad;
    }
}

Eigen::MatrixXcd MleObjective::cholesky_factor(const Eigen::VectorXd& x) const {
    Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(d_, d_);
    int k = 0;
    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j <= i; ++j) l(i, j) = x(k++);
    }
    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j < i; ++j) l(i, j) += cplx(0.0, x(k++));
    }
    return l;
}

Eigen::VectorXd MleObjective::parameters_from_factor(const Eigen::MatrixXcd& l) const {
    Eigen::VectorXd x(parameters());
    int k = 0;
    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j <= i; ++j) x(k++) = l(i, j).real();
    }
    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j < i; ++j) x(k++) = l(i, j).imag();
    }
    return x;
}

Eigen::MatrixXcd MleObjective::density(const Eigen::VectorXd& x) const {
    const Eigen::MatrixXcd l = cholesky_factor(x);
    const Eigen::MatrixXcd xm = l * l.adjoint();
    return xm / xm.trace().real();
}

double MleObjective::value(const Eigen::VectorXd& x) const {
    const Eigen::MatrixXcd rho = density(x);
    double f = 0.0;
    for (const auto& t : terms_) f += t.weight * std::norm((rho * t.op).trace() - t.target);
    return f;
}

double MleObjective::value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const {
    const Eigen::MatrixXcd l = cholesky_factor(x);
    const Eigen::MatrixXcd xm = l * l.adjoint();
    const double tr = xm.trace().real();
    const Eigen::MatrixXcd rho = xm / tr;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d_, d_);

    // f = Σ w|Tr(ρO) − m|²,  df = 2 Re Tr(dX Γ),  Γ = Σ w r̄ (O − Tr(ρO)) / Tr X
    double f = 0.0;
    Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Zero(d_, d_);
    for (const auto& t : terms_) {
        const cplx expect = (rho * t.op).trace();
        const cplx r = expect - t.target;
        f += t.weight * std::norm(r);
        gamma += (t.weight * std::conj(r) / tr) * (t.op - expect * id);
    }
    // dX = dL L† + L dL†  ⇒  df = 2 Re Tr(dL S),  S = L†(Γ + Γ†)
    const Eigen::MatrixXcd s = l.adjoint() * (gamma + gamma.adjoint());
    grad.resize(parameters());
    int k = 0;
    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j <= i; ++j) grad(k++) = 2.0 * s(j, i).real();
    }
    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j < i; ++j) grad(k++) = -2.0 * s(j, i).imag();
    }
    return f;
}

DensityMatrixEstimate mle_density_matrix(const MomentSet& a_moments, int n_max, const Eigen::VectorXcd& target,
                                         const MleOptions& options) {
    const MleObjective obj(a_moments, n_max, options.error_floor);
    const int p = obj.parameters();
    const int d = obj.dimension();

    Eigen::VectorXd x = obj.parameters_from_factor(Eigen::MatrixXcd::Identity(d, d) / std::sqrt(static_cast<double>(d)));
    Eigen::VectorXd g(p), g_new(p);
    double f = obj.value_and_gradient(x, g);
    Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(p, p) / std::max(1.0, g.norm());

    DensityMatrixEstimate out;
    out.n_max = n_max;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        if (g.norm() <= options.gradient_tol * (1.0 + f)) {
            out.converged = true;
            break;
        }
        Eigen::VectorXd dir = -h_inv * g;
        if (dir.dot(g) >= 0.0) {
            h_inv.setIdentity();
            dir = -g;
        }
        double step = 1.0;
        Eigen::VectorXd x_new;
        double f_new = f;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            x_new = x + step * dir;
            f_new = obj.value_and_gradient(x_new, g_new);
            if (f_new <= f + 1e-4 * step * dir.dot(g)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            out.converged = std::abs(f) < 1e-20 || g.norm() < 1e-6 * (1.0 + f);
            break;
        }
        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-300) {
            const double rho_k = 1.0 / sy;
            const Eigen::MatrixXd i_p = Eigen::MatrixXd::Identity(p, p);
            h_inv = (i_p - rho_k * s * y.transpose()) * h_inv * (i_p - rho_k * y * s.transpose()) +
                    rho_k * s * s.transpose();
        }
        const double f_old = f;
        x = x_new;
        g = g_new;
        f = f_new;
        if (std::abs(f_old - f) <= 1e-15 * std::max(1.0, std::abs(f))) {
            out.converged = true;
            ++it;
            break;
        }
    }
    if (!out.converged) {
        std::ostringstream os;
        os << "MLE did not converge after " << it << " iterations (residual " << f << ")";
        warn(os.str());
    }
    out.rho = obj.density(x);
    out.rho = 0.5 * (out.rho + out.rho.adjoint());
    out.residual = f;
    out.iterations = it;
    Eigen::VectorXcd t = Eigen::VectorXcd::Zero(d);
    t.head(std::min<Eigen::Index>(d, target.size())) = target.head(std::min<Eigen::Index>(d, target.size()));
    t.normalize();
    out.fidelity = (t.adjoint() * out.rho * t)(0, 0).real();
    if (a_moments.max_order >= 4) {
        try {
            out.g2 = g2(a_moments);
        } catch (const UndefinedG2&) {
        }
    }
    return out;
}

}  // namespace shaping

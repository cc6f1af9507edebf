#include "photon_shaping/quantum.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "photon_shaping/errors.hpp"

namespace shaping {

CompositeBasis::CompositeBasis(int n_transmon, int n_resonator)
    : n_transmon_(n_transmon), n_resonator_(n_resonator) {
    if (n_transmon < 1 || n_resonator < 1) {
        throw DimensionMismatch("basis level counts must be positive");
    }
}

int CompositeBasis::index(int transmon_level, int photon_number) const {
    if (transmon_level < 0 || transmon_level >= n_transmon_ || photon_number < 0 ||
        photon_number >= n_resonator_) {
        throw DimensionMismatch("basis label out of range: (" + std::to_string(transmon_level) +
                                ", " + std::to_string(photon_number) + ")");
    }
    return transmon_level * n_resonator_ + photon_number;
}

std::pair<int, int> CompositeBasis::levels(int flat_index) const {
    if (flat_index < 0 || flat_index >= dim()) {
        throw DimensionMismatch("flat index out of range: " + std::to_string(flat_index));
    }
    return {flat_index / n_resonator_, flat_index % n_resonator_};
}

Operator::Operator(CompositeBasis basis, Matrix entries) : basis_(basis), m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() != basis_.dim()) {
        throw DimensionMismatch("operator of size " + std::to_string(m_.rows()) + "x" +
                                std::to_string(m_.cols()) + " does not match basis dimension " +
                                std::to_string(basis_.dim()));
    }
}

Operator Operator::zero(const CompositeBasis& basis) {
    return {basis, Matrix::Zero(basis.dim(), basis.dim())};
}

Operator Operator::identity(const CompositeBasis& basis) {
    return {basis, Matrix::Identity(basis.dim(), basis.dim())};
}

Operator Operator::transmon_projector(const CompositeBasis& basis, int level_to, int level_from) {
    Matrix m = Matrix::Zero(basis.dim(), basis.dim());
    for (int n = 0; n < basis.n_resonator(); ++n) {
        m(basis.index(level_to, n), basis.index(level_from, n)) = 1.0;
    }
    return {basis, std::move(m)};
}

Operator Operator::adjoint() const { return {basis_, m_.adjoint()}; }

bool Operator::is_hermitian(double tol) const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol; }

Operator& Operator::operator+=(const Operator& rhs) {
    if (!(basis_ == rhs.basis_)) throw DimensionMismatch("operator bases differ");
    m_ += rhs.m_;
    return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
    if (!(basis_ == rhs.basis_)) throw DimensionMismatch("operator bases differ");
    m_ -= rhs.m_;
    return *this;
}

Operator& Operator::operator*=(cplx s) {
    m_ *= s;
    return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
    if (!(a.basis_ == b.basis_)) throw DimensionMismatch("operator bases differ");
    return {a.basis_, a.m_ * b.m_};
}

double min_hermitian_eigenvalue(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

State::State(CompositeBasis basis, Matrix rho) : basis_(basis), rho_(std::move(rho)) {
    if (rho_.rows() != basis_.dim() || rho_.cols() != basis_.dim()) {
        throw DimensionMismatch("density matrix does not match basis dimension");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > hermiticity_tol) {
        throw InvalidState("density matrix is not Hermitian");
    }
    if (std::abs(rho_.trace() - 1.0) > trace_tol) {
        throw InvalidState("density matrix trace deviates from 1 by " +
                           std::to_string(std::abs(rho_.trace() - 1.0)));
    }
    if (min_hermitian_eigenvalue(rho_) < -positivity_tol) {
        throw InvalidState("density matrix has a negative eigenvalue");
    }
}

State State::pure(const CompositeBasis& basis, const Vector& ket) {
    if (ket.size() != basis.dim()) throw DimensionMismatch("ket does not match basis dimension");
    const double norm = ket.norm();
    if (norm == 0.0) throw InvalidState("zero ket");
    const Vector psi = ket / norm;
    return {basis, psi * psi.adjoint()};
}

State State::basis_state(const CompositeBasis& basis, int transmon_level, int photon_number) {
    Vector ket = Vector::Zero(basis.dim());
    ket(basis.index(transmon_level, photon_number)) = 1.0;
    return pure(basis, ket);
}

State State::maximally_mixed(const CompositeBasis& basis) {
    return {basis, Matrix::Identity(basis.dim(), basis.dim()) / static_cast<double>(basis.dim())};
}

double State::min_eigenvalue() const { return min_hermitian_eigenvalue(rho_); }

Operator resonator_annihilation(const CompositeBasis& basis) {
    Matrix m = Matrix::Zero(basis.dim(), basis.dim());
    for (int q = 0; q < basis.n_transmon(); ++q) {
        for (int n = 1; n < basis.n_resonator(); ++n) {
            m(basis.index(q, n - 1), basis.index(q, n)) = std::sqrt(static_cast<double>(n));
        }
    }
    return {basis, std::move(m)};
}

Operator transmon_annihilation(const CompositeBasis& basis) {
    Matrix m = Matrix::Zero(basis.dim(), basis.dim());
    for (int k = 1; k < basis.n_transmon(); ++k) {
        for (int n = 0; n < basis.n_resonator(); ++n) {
            m(basis.index(k - 1, n), basis.index(k, n)) = std::sqrt(static_cast<double>(k));
        }
    }
    return {basis, std::move(m)};
}

cplx expect(const Operator& op, const Matrix& rho) {
    if (rho.rows() != op.dim() || rho.cols() != op.dim()) {
        throw DimensionMismatch("operator and density matrix dimensions differ");
    }
    // Tr(A B) = sum_ij A_ij B_ji
    return op.matrix().cwiseProduct(rho.transpose()).sum();
}

cplx expect(const Operator& op, const State& state) {
    if (!(op.basis() == state.basis())) throw DimensionMismatch("operator and state bases differ");
    return expect(op, state.rho());
}

Matrix partial_trace_transmon(const CompositeBasis& basis, const Matrix& rho) {
    const int nq = basis.n_transmon();
    const int nr = basis.n_resonator();
    Matrix out = Matrix::Zero(nq, nq);
    for (int i = 0; i < nq; ++i) {
        for (int j = 0; j < nq; ++j) {
            for (int n = 0; n < nr; ++n) out(i, j) += rho(i * nr + n, j * nr + n);
        }
    }
    return out;
}

Matrix partial_trace_transmon(const State& state) {
    return partial_trace_transmon(state.basis(), state.rho());
}

Matrix partial_trace_resonator(const CompositeBasis& basis, const Matrix& rho) {
    const int nq = basis.n_transmon();
    const int nr = basis.n_resonator();
    Matrix out = Matrix::Zero(nr, nr);
    for (int m = 0; m < nr; ++m) {
        for (int n = 0; n < nr; ++n) {
            for (int q = 0; q < nq; ++q) out(m, n) += rho(q * nr + m, q * nr + n);
        }
    }
    return out;
}

State tensor_product(const Matrix& rho_transmon, const Matrix& rho_resonator) {
    const CompositeBasis basis(static_cast<int>(rho_transmon.rows()),
                               static_cast<int>(rho_resonator.rows()));
    const int nr = basis.n_resonator();
    Matrix rho(basis.dim(), basis.dim());
    for (int i = 0; i < basis.n_transmon(); ++i) {
        for (int j = 0; j < basis.n_transmon(); ++j) {
            rho.block(i * nr, j * nr, nr, nr) = rho_transmon(i, j) * rho_resonator;
        }
    }
    return {basis, std::move(rho)};
}

}  // namespace shaping

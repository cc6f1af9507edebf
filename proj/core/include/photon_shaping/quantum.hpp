#pragma once

// Dense operator algebra on the transmon ⊗ resonator product space.
//
// Flat index ordering is transmon-major:
//     index = transmon_level * n_resonator + photon_number
// and is part of the serialized format of every matrix the library writes.

#include <Eigen/Dense>

#include <utility>

#include "photon_shaping/units.hpp"

namespace shaping {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class CompositeBasis {
public:
    CompositeBasis() = default;
    CompositeBasis(int n_transmon, int n_resonator);

    int n_transmon() const { return n_transmon_; }
    int n_resonator() const { return n_resonator_; }
    int dim() const { return n_transmon_ * n_resonator_; }

    int index(int transmon_level, int photon_number) const;
    std::pair<int, int> levels(int flat_index) const;

    friend bool operator==(const CompositeBasis&, const CompositeBasis&) = default;

private:
    int n_transmon_ = 6;
    int n_resonator_ = 3;
};

/// Square matrix acting on a CompositeBasis.
class Operator {
public:
    Operator() = default;
    Operator(CompositeBasis basis, Matrix entries);

    static Operator zero(const CompositeBasis& basis);
    static Operator identity(const CompositeBasis& basis);
    /// |transmon_to, n⟩⟨transmon_from, n| summed over photon numbers.
    static Operator transmon_projector(const CompositeBasis& basis, int level_to, int level_from);

    const CompositeBasis& basis() const { return basis_; }
    const Matrix& matrix() const { return m_; }
    int dim() const { return basis_.dim(); }

    Operator adjoint() const;
    bool is_hermitian(double tol = 1e-10) const;

    Operator& operator+=(const Operator& rhs);
    Operator& operator-=(const Operator& rhs);
    Operator& operator*=(cplx s);

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(Operator a, cplx s) { return a *= s; }
    friend Operator operator*(cplx s, Operator a) { return a *= s; }
    friend Operator operator*(const Operator& a, const Operator& b);

private:
    CompositeBasis basis_;
    Matrix m_;
};

/// Density matrix on a CompositeBasis. Construction validates Hermiticity,
/// unit trace and positivity.
class State {
public:
    static constexpr double hermiticity_tol = 1e-10;
    static constexpr double trace_tol = 1e-8;
    static constexpr double positivity_tol = 1e-8;

    State(CompositeBasis basis, Matrix rho);

    /// |ψ⟩⟨ψ| for a (not necessarily normalized) ket.
    static State pure(const CompositeBasis& basis, const Vector& ket);
    static State basis_state(const CompositeBasis& basis, int transmon_level, int photon_number);
    static State maximally_mixed(const CompositeBasis& basis);

    const CompositeBasis& basis() const { return basis_; }
    const Matrix& rho() const { return rho_; }

    double min_eigenvalue() const;

private:
    CompositeBasis basis_;
    Matrix rho_;
};

Operator resonator_annihilation(const CompositeBasis& basis);
Operator transmon_annihilation(const CompositeBasis& basis);

/// Tr(op · rho).
cplx expect(const Operator& op, const State& state);
cplx expect(const Operator& op, const Matrix& rho);

/// Reduced density matrix over transmon levels.
Matrix partial_trace_transmon(const State& state);
Matrix partial_trace_transmon(const CompositeBasis& basis, const Matrix& rho);
/// Reduced density matrix over photon numbers.
Matrix partial_trace_resonator(const CompositeBasis& basis, const Matrix& rho);

/// rho_q ⊗ rho_r in transmon-major ordering.
State tensor_product(const Matrix& rho_transmon, const Matrix& rho_resonator);

double min_hermitian_eigenvalue(const Matrix& m);

}  // namespace shaping

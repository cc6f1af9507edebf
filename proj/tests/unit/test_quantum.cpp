#include <gtest/gtest.h>

#include "photon_shaping/errors.hpp"
#include "photon_shaping/quantum.hpp"

using namespace shaping;

TEST(CompositeBasis, IndexIsTransmonMajorAndInvertible) {
    const CompositeBasis b(6, 3);
    EXPECT_EQ(b.dim(), 18);
    EXPECT_EQ(b.index(2, 0), 6);
    EXPECT_EQ(b.index(0, 1), 1);
    for (int i = 0; i < b.dim(); ++i) {
        const auto [q, n] = b.levels(i);
        EXPECT_EQ(b.index(q, n), i);
    }
}

TEST(Operators, LadderCommutatorBelowTruncation) {
    const CompositeBasis b(4, 5);
    const Matrix a = resonator_annihilation(b).matrix();
    const Matrix c = a * a.adjoint() - a.adjoint() * a;
    for (int q = 0; q < 4; ++q) {
        for (int n = 0; n < 4; ++n) {
            const int i = b.index(q, n);
            EXPECT_NEAR(c(i, i).real(), 1.0, 1e-14);
        }
    }
}

TEST(Operators, TransmonLoweringHasHarmonicElements) {
    const CompositeBasis b(4, 2);
    const Matrix m = transmon_annihilation(b).matrix();
    EXPECT_NEAR(m(b.index(0, 1), b.index(1, 1)).real(), 1.0, 1e-14);
    EXPECT_NEAR(m(b.index(1, 0), b.index(2, 0)).real(), std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(m(b.index(2, 0), b.index(3, 0)).real(), std::sqrt(3.0), 1e-14);
}

TEST(Operators, NumberExpectationOnBasisState) {
    const CompositeBasis b(3, 3);
    const Operator a = resonator_annihilation(b);
    const State s = State::basis_state(b, 1, 2);
    EXPECT_NEAR(expect(a.adjoint() * a, s).real(), 2.0, 1e-14);
}

TEST(PartialTrace, RecoversFactorsOfProductState) {
    Matrix rq = Matrix::Zero(3, 3), rr = Matrix::Zero(2, 2);
    rq(0, 0) = 0.5;
    rq(2, 2) = 0.5;
    rq(0, 2) = rq(2, 0) = 0.3;
    rr(0, 0) = 0.25;
    rr(1, 1) = 0.75;
    rr(0, 1) = cplx(0.1, 0.2);
    rr(1, 0) = std::conj(rr(0, 1));
    const State s = tensor_product(rq, rr);
    EXPECT_LT((partial_trace_transmon(s) - rq).norm(), 1e-14);
    EXPECT_LT((partial_trace_resonator(s.basis(), s.rho()) - rr).norm(), 1e-14);
}

TEST(State, RejectsNonPhysicalMatrices) {
    const CompositeBasis b(2, 2);
    Matrix m = Matrix::Identity(4, 4);
    EXPECT_THROW(State(b, m), InvalidState);  // trace 4
    m = Matrix::Zero(4, 4);
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    EXPECT_THROW(State(b, m), InvalidState);
    m = Matrix::Identity(4, 4) / 4.0;
    m(0, 1) = 0.1;
    EXPECT_THROW(State(b, m), InvalidState);  // not Hermitian
}

TEST(State, PureStateIsNormalized) {
    const CompositeBasis b(2, 2);
    Vector v(4);
    v << 1.0, 0.0, 2.0, 0.0;
    const State s = State::pure(b, v);
    EXPECT_NEAR(s.rho().trace().real(), 1.0, 1e-14);
    EXPECT_NEAR(s.min_eigenvalue(), 0.0, 1e-12);
}

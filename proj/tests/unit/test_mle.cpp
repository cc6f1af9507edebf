#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "photon_shaping/errors.hpp"
#include "photon_shaping/mle.hpp"

using namespace shaping;

namespace {

MomentSet with_errors(MomentSet m, double e) {
    m.error.setConstant(e);
    return m;
}

}  // namespace

TEST(MleObjective, FactorRoundTrip) {
    MomentSet m(4);
    m.value(0, 0) = 1.0;
    const MleObjective obj(m, 3);
    EXPECT_EQ(obj.dimension(), 4);
    EXPECT_EQ(obj.parameters(), 16);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Eigen::VectorXd x(16);
    for (auto& v : x) v = g(rng);
    const Eigen::MatrixXcd l = obj.cholesky_factor(x);
    EXPECT_LT((obj.parameters_from_factor(l) - x).norm(), 1e-12);
    const Eigen::MatrixXcd rho = obj.density(x);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(rho).eigenvalues().minCoeff(), -1e-12);
}

TEST(MleObjective, GradientMatchesFiniteDifference) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(3, 3);
    rho(0, 0) = 0.4;
    rho(1, 1) = 0.6;
    rho(0, 1) = rho(1, 0) = 0.2;
    const MleObjective obj(with_errors(moments_of_state(rho), 0.01), 3);
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(obj.parameters(), 0.3, 1.1);
    Eigen::VectorXd grad;
    obj.value_and_gradient(x, grad);
    const double h = 1e-6;
    for (int k = 0; k < obj.parameters(); ++k) {
        Eigen::VectorXd xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        const double fd = (obj.value(xp) - obj.value(xm)) / (2 * h);
        EXPECT_NEAR(grad(k), fd, 1e-4 * (1.0 + std::abs(fd)));
    }
}

TEST(Mle, RecoversSinglePhoton) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    rho(0, 0) = 0.2;
    rho(1, 1) = 0.8;
    Eigen::VectorXcd one = Eigen::VectorXcd::Zero(4);
    one(1) = 1.0;
    const auto est = mle_density_matrix(with_errors(moments_of_state(rho), 1e-3), 3, one);
    EXPECT_TRUE(est.converged);
    EXPECT_NEAR(est.fidelity, 0.8, 1e-3);
    EXPECT_LT((est.rho - rho).norm(), 5e-3);
    ASSERT_TRUE(est.g2.has_value());
    EXPECT_NEAR(est.g2->value, 0.0, 1e-9);
}

TEST(Mle, RecoversSuperpositionCoherence) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    rho(0, 0) = 0.55;
    rho(1, 1) = 0.45;
    rho(0, 1) = cplx(0.3, 0.1);
    rho(1, 0) = std::conj(rho(0, 1));
    Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(4);
    plus(0) = plus(1) = 1.0;
    const auto est = mle_density_matrix(with_errors(moments_of_state(rho), 1e-3), 3, plus);
    const double expected = 0.5 * (0.55 + 0.45 + 2 * 0.3);
    EXPECT_NEAR(est.fidelity, expected, 2e-3);
}

TEST(Mle, NeedsTwoPhotonSpace) {
    MomentSet m(4);
    EXPECT_THROW(MleObjective(m, 1), Error);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "photon_shaping/diagnostics.hpp"
#include "photon_shaping/errors.hpp"
#include "photon_shaping/tomography.hpp"

using namespace shaping;

namespace {

Eigen::MatrixXcd fock(int n, int dim) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dim, dim);
    r(n, n) = 1.0;
    return r;
}

Eigen::MatrixXcd random_state(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = {g(rng), g(rng)};
    Eigen::MatrixXcd r = a * a.adjoint();
    return r / r.trace();
}

}  // namespace

TEST(ShotDensity, NormalizedOnFineGrid) {
    const NoiseModel noise{4.0};
    const double h = 0.05, ext = 14.0;
    double sum = 0.0;
    for (double x = -ext; x < ext; x += h)
        for (double y = -ext; y < ext; y += h) sum += shot_density(fock(1, 2), noise, {x + h / 2, y + h / 2}) * h * h;
    EXPECT_NEAR(sum, 1.0, 1e-4);
}

TEST(Moments, ExactFockMoments) {
    const MomentSet m = moments_of_state(fock(2, 4));
    EXPECT_NEAR(m(1, 1).real(), 2.0, 1e-12);
    EXPECT_NEAR(m(2, 2).real(), 2.0, 1e-12);
    EXPECT_NEAR(std::abs(m(0, 1)), 0.0, 1e-12);
}

// deconvolve(convolve(a, h), h) == a for random photon states
TEST(Moments, InversionRecoversSignal) {
    std::mt19937_64 rng(11);
    const MomentSet noise = thermal_noise_moments(10.0);
    MomentSet vacuum_reference = convolve_moments(moments_of_state(fock(0, 1)), noise);
    vacuum_reference.error = Eigen::MatrixXd::Zero(5, 5);
    for (int trial = 0; trial < 20; ++trial) {
        const MomentSet a = moments_of_state(random_state(rng, 4));
        MomentSet v = convolve_moments(a, noise);
        v.error = Eigen::MatrixXd::Zero(5, 5);
        const MomentSet back = deconvolve_moments(v, vacuum_reference);
        for (int n = 0; n <= 4; ++n)
            for (int k = 0; n + k <= 4; ++k) EXPECT_LT(std::abs(back(n, k) - a(n, k)), 1e-9);
    }
    EXPECT_NEAR(estimate_noise_number(vacuum_reference), 10.0, 1e-12);
}

TEST(G2, FockAndCoherentLimits) {
    MomentSet one = moments_of_state(fock(1, 3));
    one.error = Eigen::MatrixXd::Zero(5, 5);
    EXPECT_NEAR(g2(one).value, 0.0, 1e-12);
    MomentSet two = moments_of_state(fock(2, 3));
    two.error = Eigen::MatrixXd::Zero(5, 5);
    EXPECT_NEAR(g2(two).value, 0.5, 1e-12);
    MomentSet vac = moments_of_state(fock(0, 3));
    vac.error = Eigen::MatrixXd::Zero(5, 5);
    EXPECT_THROW(g2(vac), UndefinedG2);
}

TEST(Shots, ThreadCountDoesNotChangeHistogram) {
    ShotOptions o;
    o.seed = 99;
    o.threads = 1;
    const Histogram2D a = simulate_shots(fock(1, 2), NoiseModel{2.0}, 20000, o);
    o.threads = 3;
    const Histogram2D b = simulate_shots(fock(1, 2), NoiseModel{2.0}, 20000, o);
    EXPECT_EQ(a.counts(), b.counts());
    EXPECT_EQ(a.shots(), 20000u);
    o.seed = 100;
    EXPECT_NE(simulate_shots(fock(1, 2), NoiseModel{2.0}, 20000, o).counts(), a.counts());
}

TEST(Shots, VacuumHistogramGivesNoiseNumber) {
    ShotOptions o;
    o.seed = 5;
    const Histogram2D h = simulate_shots(fock(0, 1), NoiseModel{3.0}, 200000, o);
    const MomentSet m = moments_from_histogram(h);
    // binning adds w²/6 to ⟨|V|²⟩
    const double w = h.bin_width();
    EXPECT_NEAR(estimate_noise_number(m) - w * w / 6.0, 3.0, 5.0 * m.error(1, 1) + 0.01);
}

TEST(Histogram, MergeNeedsSameGrid) {
    Histogram2D a(2.0, 10), b(2.0, 12);
    EXPECT_THROW(a.merge(b), Error);
    Histogram2D c(2.0, 10);
    c.add(1, 2, 3);
    a.merge(c);
    EXPECT_EQ(a.count(1, 2), 3u);
    EXPECT_EQ(a.shots(), 3u);
}

#include <gtest/gtest.h>

#include <cmath>

#include "photon_shaping/analysis.hpp"
#include "photon_shaping/errors.hpp"

using namespace shaping;

namespace {

template <class F>
ModeFunction sampled(double t_end, double dt, F&& f) {
    ModeFunction m;
    const int n = static_cast<int>(std::lround(t_end / dt));
    for (int i = 0; i <= n; ++i) {
        m.times.push_back(i * dt);
        m.psi.push_back(f(i * dt));
    }
    return m;
}

}  // namespace

TEST(Symmetry, GaussianIsSymmetricAboutItsCentre) {
    const auto m = sampled(200.0, 0.1, [](double t) { return cplx(std::exp(-0.5 * std::pow((t - 83.3) / 12.0, 2))); });
    const SymmetryReport r = symmetry(m);
    EXPECT_NEAR(r.s, 1.0, 1e-6);
    EXPECT_NEAR(r.t0_opt, 83.3, 0.01);
}

// exponential decay: s(t0) = 2κt0 e^{−κt0}, maximal 2/e at κt0 = 1
TEST(Symmetry, ExponentialDecayOracle) {
    const double k = 0.5;
    const auto m = sampled(80.0, 0.01, [&](double t) { return cplx(std::sqrt(k) * std::exp(-0.5 * k * t)); });
    const SymmetryReport r = symmetry(m);
    EXPECT_NEAR(r.s, 2.0 / std::exp(1.0), 1e-3);
    EXPECT_NEAR(r.t0_opt, 1.0 / k, 0.02);
}

TEST(Symmetry, ScaleInvariant) {
    auto m = sampled(100.0, 0.1, [](double t) { return cplx(t * std::exp(-t / 10.0), 0.0); });
    const double s1 = symmetry(m).s;
    for (auto& v : m.psi) v *= cplx(0.0, 3.0);
    EXPECT_NEAR(symmetry(m).s, s1, 1e-12);
}

TEST(Mode, NormalizeAndRejectZero) {
    const auto m = normalize(sampled(50.0, 0.1, [](double t) { return cplx(std::sin(t / 5.0)); }));
    EXPECT_NEAR(m.norm_squared(), 1.0, 1e-12);
    EXPECT_TRUE(m.normalized);
    EXPECT_NEAR(std::abs(matched_filter(m, m.times, m.psi)), 1.0, 1e-12);
    EXPECT_THROW(normalize(sampled(10.0, 0.1, [](double) { return cplx(0.0); })), AnalysisError);
}

TEST(Mode, NonUniformGridRejected) {
    ModeFunction m;
    m.times = {0.0, 0.1, 0.3};
    m.psi = {1.0, 1.0, 1.0};
    EXPECT_THROW(m.norm_squared(), AnalysisError);
}

TEST(Spectrum, PeakAtCarrierFrequency) {
    const double f = 0.0123;
    const auto m = sampled(400.0, 0.1, [&](double t) {
        return std::exp(-0.5 * std::pow((t - 200.0) / 40.0, 2)) * std::polar(1.0, two_pi * f * t);
    });
    const Spectrum s = fourier_spectrum(m);
    EXPECT_NEAR(s.peak_frequency, f, 0.05 * s.resolution + 1e-5);
    EXPECT_LT(s.resolution, 1e-3);
}

TEST(Phase, ConstantPhaseHasZeroSpread) {
    const auto m = sampled(50.0, 0.1, [](double t) { return std::polar(std::exp(-t / 10.0), 0.7); });
    EXPECT_NEAR(phase_std(m), 0.0, 1e-6);
    const auto chirp = sampled(50.0, 0.1, [](double t) { return std::polar(1.0, 0.02 * t * t); });
    EXPECT_GT(phase_std(chirp), 1.0);
}

TEST(MatchedFilter, ResamplesCoarserRecord) {
    const auto m = normalize(sampled(20.0, 0.05, [](double t) { return cplx(std::sin(3.14159 * t / 20.0)); }));
    std::vector<double> t;
    std::vector<cplx> v;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(0.1 * i);
        v.push_back(2.0 * m.psi[0] + cplx(std::sin(3.14159 * 0.1 * i / 20.0)));
    }
    const cplx direct = matched_filter(m, m.times, [&] {
        std::vector<cplx> out;
        for (double x : m.times) out.push_back(2.0 * m.psi[0] + cplx(std::sin(3.14159 * x / 20.0)));
        return out;
    }());
    EXPECT_NEAR(std::abs(matched_filter(m, t, v) - direct), 0.0, 1e-3);
}

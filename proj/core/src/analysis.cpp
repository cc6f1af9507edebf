#include "photon_shaping/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include "photon_shaping/errors.hpp"

namespace shaping {

namespace {

template <class F>
double trapezoid(std::size_t n, double dt, F&& f) {
    if (n < 2) return 0.0;
    double s = 0.5 * (f(0) + f(n - 1));
    for (std::size_t i = 1; i + 1 < n; ++i) s += f(i);
    return s * dt;
}

template <class F>
cplx trapezoid_c(std::size_t n, double dt, F&& f) {
    if (n < 2) return 0.0;
    cplx s = 0.5 * (f(0) + f(n - 1));
    for (std::size_t i = 1; i + 1 < n; ++i) s += f(i);
    return s * dt;
}

void check_grid(const std::vector<double>& t) {
    if (t.size() < 2) throw AnalysisError("mode function needs at least two samples");
    const double dt = t[1] - t[0];
    if (!(dt > 0.0)) throw AnalysisError("time grid must increase");
    const double span = t.back() - t.front();
    if (std::abs(span - dt * static_cast<double>(t.size() - 1)) > 1e-6 * std::max(1.0, span)) {
        throw AnalysisError("time grid is not uniform");
    }
}

}  // namespace

double ModeFunction::dt() const {
    check_grid(times);
    return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

double ModeFunction::norm_squared() const {
    return trapezoid(psi.size(), dt(), [&](std::size_t i) { return std::norm(psi[i]); });
}

ModeFunction normalize(ModeFunction mode) {
    const double n2 = mode.norm_squared();
    if (!(n2 > 0.0)) throw AnalysisError("cannot normalize a zero mode");
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& v : mode.psi) v *= inv;
    mode.normalized = true;
    return mode;
}

ModeFunction mode_function(const OutputRecord& record, ModeSource source) {
    if (record.times.size() < 2) throw AnalysisError("empty output record");
    if (!(record.emitted > 1e-6)) throw AnalysisError("output record carries no emitted power");
    ModeFunction m;
    m.times = record.times;
    if (source == ModeSource::mean_field) {
        m.psi = record.a_out;
    } else {
        m.psi.resize(record.power.size());
        for (std::size_t i = 0; i < m.psi.size(); ++i) m.psi[i] = std::sqrt(std::max(0.0, record.power[i]));
    }
    // The last record may sit closer than one stride to the previous one.
    const double dt = m.times[1] - m.times[0];
    while (m.times.size() > 2 && std::abs((m.times.back() - m.times[m.times.size() - 2]) - dt) > 1e-9 * dt) {
        m.times.pop_back();
        m.psi.pop_back();
    }
    return normalize(std::move(m));
}

SymmetryReport symmetry(const ModeFunction& mode, double t0_tol) {
    const double dt = mode.dt();
    const std::size_t n = mode.psi.size();
    const double t_first = mode.times.front();
    const double n2 = mode.norm_squared();
    if (!(n2 > 0.0)) throw AnalysisError("symmetry of a zero mode");

    auto sample = [&](double t) -> cplx {
        const double x = (t - t_first) / dt;
        if (x < 0.0 || x > static_cast<double>(n - 1)) return 0.0;
        const auto i = static_cast<std::size_t>(x);
        if (i + 1 >= n) return mode.psi[n - 1];
        const double w = x - static_cast<double>(i);
        return (1.0 - w) * mode.psi[i] + w * mode.psi[i + 1];
    };
    auto overlap = [&](double t0) {
        const cplx s = trapezoid_c(n, dt, [&](std::size_t i) {
            return std::conj(sample(2.0 * t0 - mode.times[i])) * mode.psi[i];
        });
        return std::abs(s) / n2;
    };

    double best = -1.0;
    double best_t0 = t_first;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = overlap(mode.times[i]);
        if (v > best) {
            best = v;
            best_t0 = mode.times[i];
        }
    }
    // golden-section refinement within one stride of the grid optimum
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = best_t0 - dt;
    double b = best_t0 + dt;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = overlap(c);
    double fd = overlap(d);
    while (b - a > t0_tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = overlap(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = overlap(d);
        }
    }
    const double t_mid = 0.5 * (a + b);
    const double f_mid = overlap(t_mid);
    if (f_mid > best) {
        best = f_mid;
        best_t0 = t_mid;
    }
    return {best, best_t0};
}

Spectrum fourier_spectrum(const ModeFunction& mode, int pad) {
    const double dt = mode.dt();
    const std::size_t n = mode.psi.size();
    std::size_t nfft = 1;
    while (nfft < n * static_cast<std::size_t>(std::max(1, pad))) nfft <<= 1;

    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nfft));
    if (!buf) throw AnalysisError("FFT allocation failed");
    std::unique_ptr<fftw_complex, decltype(&fftw_free)> guard(buf, &fftw_free);
    // Planner calls are not thread-safe.
    static std::mutex planner;
    fftw_plan plan;
    {
        std::lock_guard lock(planner);
        plan = fftw_plan_dft_1d(static_cast<int>(nfft), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (std::size_t i = 0; i < nfft; ++i) {
        const cplx v = i < n ? mode.psi[i] : cplx(0.0);
        buf[i][0] = v.real();
        buf[i][1] = v.imag();
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner);
        fftw_destroy_plan(plan);
    }

    Spectrum out;
    out.resolution = 1.0 / (static_cast<double>(nfft) * dt);
    out.frequency.resize(nfft);
    out.magnitude.resize(nfft);
    // reorder to ascending frequency: k = nfft/2 .. nfft-1 are negative
    const std::size_t half = nfft / 2;
    for (std::size_t j = 0; j < nfft; ++j) {
        const std::size_t k = (j + half) % nfft;
        const double kk = k >= half ? static_cast<double>(k) - static_cast<double>(nfft) : static_cast<double>(k);
        out.frequency[j] = kk * out.resolution;
        out.magnitude[j] = dt * std::hypot(buf[k][0], buf[k][1]);
    }
    const auto imax = static_cast<std::size_t>(
        std::max_element(out.magnitude.begin(), out.magnitude.end()) - out.magnitude.begin());
    out.peak_frequency = out.frequency[imax];
    if (imax > 0 && imax + 1 < nfft) {
        const double ym = out.magnitude[imax - 1];
        const double y0 = out.magnitude[imax];
        const double yp = out.magnitude[imax + 1];
        const double den = ym - 2.0 * y0 + yp;
        if (den != 0.0) out.peak_frequency += 0.5 * (ym - yp) / den * out.resolution;
    }
    return out;
}

cplx matched_filter(const ModeFunction& mode, const std::vector<double>& times, const std::vector<cplx>& values) {
    if (times.size() != values.size()) throw AnalysisError("record times and values differ in length");
    const double dt = mode.dt();
    const std::size_t n = mode.psi.size();
    const bool same = times.size() >= n &&
                      std::abs(times.front() - mode.times.front()) < 1e-9 * std::max(1.0, dt) &&
                      std::abs(times[n - 1] - mode.times.back()) < 1e-9 * std::max(1.0, mode.times.back());
    if (same) {
        return trapezoid_c(n, dt, [&](std::size_t i) { return std::conj(mode.psi[i]) * values[i]; });
    }
    check_grid(times);
    const double vdt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (mode.times.front() < times.front() - vdt || mode.times.back() > times.back() + vdt) {
        throw AnalysisError("record does not cover the mode's time support");
    }
    auto sample = [&](double t) -> cplx {
        const double x = std::clamp((t - times.front()) / vdt, 0.0, static_cast<double>(times.size() - 1));
        const auto i = std::min(static_cast<std::size_t>(x), times.size() - 2);
        const double w = x - static_cast<double>(i);
        return (1.0 - w) * values[i] + w * values[i + 1];
    };
    return trapezoid_c(n, dt, [&](std::size_t i) { return std::conj(mode.psi[i]) * sample(mode.times[i]); });
}

cplx matched_filter(const ModeFunction& mode, const OutputRecord& record) {
    return matched_filter(mode, record.times, record.a_out);
}

double phase_std(const ModeFunction& mode) {
    cplx sum = 0.0;
    double weight = 0.0;
    for (const cplx& v : mode.psi) {
        const double w = std::norm(v);
        if (w == 0.0) continue;
        sum += w * v / std::abs(v);
        weight += w;
    }
    if (!(weight > 0.0)) throw AnalysisError("phase of a zero mode");
    const double r = std::min(1.0, std::abs(sum) / weight);
    return std::sqrt(-2.0 * std::log(r));
}

}  // namespace shaping

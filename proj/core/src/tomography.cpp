#include "photon_shaping/tomography.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "photon_shaping/diagnostics.hpp"
#include "photon_shaping/errors.hpp"

namespace shaping {

Histogram2D::Histogram2D(double extent, int bins)
    : extent_(extent), bins_(bins), counts_(static_cast<std::size_t>(bins) * bins, 0) {
    if (!(extent > 0.0) || bins < 1) throw Error("histogram needs a positive extent and bin count");
}

void Histogram2D::add(int i, int j, std::uint64_t n) {
    count(i, j) += n;
    shots_ += n;
}

void Histogram2D::merge(const Histogram2D& other) {
    if (other.bins_ != bins_ || other.extent_ != extent_) throw Error("histogram grids differ");
    for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
    shots_ += other.shots_;
}

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

double shot_density(const Eigen::MatrixXcd& rho, const NoiseModel& noise, cplx v) {
    // Husimi function of ρ smoothed by thermal noise of occupation N:
    // P(V) = e^{−|V|²/(N+1)}/(π(N+1)) Σ ρ_mn Σ_k C(m,k)C(n,k) k! τ^k μ*^{m−k} μ^{n−k} / √(m!n!)
    // with μ = V/(N+1), τ = N/(N+1).
    const double s = noise.n + 1.0;
    const cplx mu = v / s;
    const double tau = noise.n / s;
    const int d = static_cast<int>(rho.rows());
    std::vector<cplx> mu_pow(d), mu_cpow(d);
    std::vector<double> tau_pow(d);
    mu_pow[0] = mu_cpow[0] = 1.0;
    tau_pow[0] = 1.0;
    for (int k = 1; k < d; ++k) {
        mu_pow[k] = mu_pow[k - 1] * mu;
        mu_cpow[k] = mu_cpow[k - 1] * std::conj(mu);
        tau_pow[k] = tau_pow[k - 1] * tau;
    }
    cplx sum = 0.0;
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            if (rho(m, n) == 0.0) continue;
            cplx inner = 0.0;
            for (int k = 0; k <= std::min(m, n); ++k) {
                inner += binomial(m, k) * binomial(n, k) * factorial(k) * tau_pow[k] * mu_cpow[m - k] * mu_pow[n - k];
            }
            sum += rho(m, n) * inner / std::sqrt(factorial(m) * factorial(n));
        }
    }
    return std::max(0.0, sum.real()) * std::exp(-std::norm(v) / s) / (std::numbers::pi * s);
}

Histogram2D simulate_shots(const Eigen::MatrixXcd& rho_signal, const NoiseModel& noise, std::uint64_t n_shots,
                           const ShotOptions& options) {
    if (n_shots < 1) throw Error("need at least one shot");
    if (noise.n < 0.0) throw Error("noise number must be non-negative");
    if (rho_signal.rows() != rho_signal.cols() || rho_signal.rows() < 1) throw DimensionMismatch("signal state must be square");
    if (!(options.resolution > 0.0) || options.streams < 1) throw Error("invalid shot options");

    const double s = noise.n + 1.0;
    const double d = static_cast<double>(rho_signal.rows());
    double extent = std::sqrt(s * (d + std::log(1.0 / options.outside_tol))) + 1.0;
    std::vector<double> cdf;
    Histogram2D grid;
    for (int attempt = 0;; ++attempt) {
        const int bins = static_cast<int>(std::ceil(2.0 * extent / options.resolution));
        grid = Histogram2D(extent, bins);
        const double w = grid.bin_width();
        cdf.assign(static_cast<std::size_t>(bins) * bins, 0.0);
        double acc = 0.0;
        for (int i = 0; i < bins; ++i) {
            for (int j = 0; j < bins; ++j) {
                acc += shot_density(rho_signal, noise, {grid.centre(i), grid.centre(j)}) * w * w;
                cdf[static_cast<std::size_t>(i) * bins + j] = acc;
            }
        }
        if (1.0 - acc <= options.outside_tol) break;
        if (attempt >= 8) throw Error("shot grid failed to capture the distribution");
        extent *= 1.25;
    }
    const double total = cdf.back();

    const int streams = options.streams;
    std::vector<Histogram2D> parts(streams, Histogram2D(grid.extent(), grid.bins()));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int k = next++; k < streams; k = next++) {
            const std::uint64_t count = n_shots / streams + (static_cast<std::uint64_t>(k) < n_shots % streams ? 1 : 0);
            std::mt19937_64 rng(splitmix64(options.seed ^ splitmix64(static_cast<std::uint64_t>(k))));
            std::uniform_real_distribution<double> uni(0.0, total);
            for (std::uint64_t shot = 0; shot < count; ++shot) {
                const auto cell = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), uni(rng)) - cdf.begin());
                const std::size_t c = std::min(cell, cdf.size() - 1);
                parts[k].add(static_cast<int>(c / grid.bins()), static_cast<int>(c % grid.bins()));
            }
        }
    };
    const int threads = std::clamp(options.threads, 1, streams);
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& p : parts) grid.merge(p);
    return grid;
}

MomentSet::MomentSet(int order)
    : max_order(order),
      value(Eigen::MatrixXcd::Zero(order + 1, order + 1)),
      error(Eigen::MatrixXd::Zero(order + 1, order + 1)) {
    if (order < 0) throw Error("moment order must be non-negative");
}

MomentSet moments_from_histogram(const Histogram2D& hist, int max_order) {
    if (hist.shots() == 0) throw Error("empty histogram");
    MomentSet out(max_order);
    Eigen::VectorXd abs_pow = Eigen::VectorXd::Zero(2 * max_order + 1);  // ⟨|V|^{2k}⟩
    const double shots = static_cast<double>(hist.shots());
    std::vector<cplx> vp(max_order + 1), vcp(max_order + 1);
    for (int i = 0; i < hist.bins(); ++i) {
        for (int j = 0; j < hist.bins(); ++j) {
            const std::uint64_t c = hist.count(i, j);
            if (c == 0) continue;
            const double w = static_cast<double>(c) / shots;
            const cplx v(hist.centre(i), hist.centre(j));
            vp[0] = vcp[0] = 1.0;
            for (int k = 1; k <= max_order; ++k) {
                vp[k] = vp[k - 1] * v;
                vcp[k] = vcp[k - 1] * std::conj(v);
            }
            for (int n = 0; n <= max_order; ++n) {
                for (int m = 0; n + m <= max_order; ++m) out.value(n, m) += w * vcp[n] * vp[m];
            }
            double a2 = 1.0;
            const double r2 = std::norm(v);
            for (int k = 0; k <= 2 * max_order; ++k) {
                abs_pow(k) += w * a2;
                a2 *= r2;
            }
        }
    }
    for (int n = 0; n <= max_order; ++n) {
        for (int m = 0; n + m <= max_order; ++m) {
            const double var = abs_pow(n + m) - std::norm(out.value(n, m));
            out.error(n, m) = std::sqrt(std::max(0.0, var) / shots);
        }
    }
    out.shots = hist.shots();
    return out;
}

MomentSet moments_of_state(const Eigen::MatrixXcd& rho, int max_order) {
    const int d = static_cast<int>(rho.rows());
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Eigen::MatrixXcd ad = a.adjoint();
    MomentSet out(max_order);
    Eigen::MatrixXcd adn = Eigen::MatrixXcd::Identity(d, d);
    for (int n = 0; n <= max_order; ++n) {
        Eigen::MatrixXcd op = adn;
        for (int m = 0; n + m <= max_order; ++m) {
            out.value(n, m) = (rho * op).trace();
            op = op * a;
        }
        adn = adn * ad;
    }
    return out;
}

MomentSet thermal_noise_moments(double n, int max_order) {
    MomentSet out(max_order);
    for (int p = 0; 2 * p <= max_order; ++p) out.value(p, p) = factorial(p) * std::pow(n + 1.0, p);
    return out;
}

MomentSet convolve_moments(const MomentSet& signal, const MomentSet& noise) {
    const int order = std::min(signal.max_order, noise.max_order);
    MomentSet out(order);
    for (int n = 0; n <= order; ++n) {
        for (int m = 0; n + m <= order; ++m) {
            cplx s = 0.0;
            for (int i = 0; i <= n; ++i) {
                for (int j = 0; j <= m; ++j) {
                    s += binomial(n, i) * binomial(m, j) * signal.value(i, j) * noise.value(n - i, m - j);
                }
            }
            out.value(n, m) = s;
        }
    }
    return out;
}

double estimate_noise_number(const MomentSet& reference) {
    if (reference.max_order < 2) throw Error("noise estimate needs second-order moments");
    return reference.value(1, 1).real() - 1.0;
}

namespace {

Eigen::MatrixXcd invert_table(const Eigen::MatrixXcd& v, const Eigen::MatrixXcd& h, int order) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(order + 1, order + 1);
    for (int total = 0; total <= order; ++total) {
        for (int n = 0; n <= total; ++n) {
            const int m = total - n;
            cplx s = v(n, m);
            for (int i = 0; i <= n; ++i) {
                for (int j = 0; j <= m; ++j) {
                    if (i == n && j == m) continue;
                    s -= binomial(n, i) * binomial(m, j) * a(i, j) * h(n - i, m - j);
                }
            }
            a(n, m) = s / h(0, 0);
        }
    }
    return a;
}

}  // namespace

MomentSet deconvolve_with_noise_table(const MomentSet& v_moments, const MomentSet& noise_table) {
    const int order = std::min(v_moments.max_order, noise_table.max_order);
    if (noise_table.value(0, 0) == 0.0) throw Error("noise table has zero normalization");
    MomentSet out(order);
    out.value = invert_table(v_moments.value, noise_table.value, order);
    // The inversion is linear in the V table; propagate independent errors.
    Eigen::MatrixXd var = Eigen::MatrixXd::Zero(order + 1, order + 1);
    for (int k = 0; k <= order; ++k) {
        for (int l = 0; k + l <= order; ++l) {
            const double e = v_moments.error.rows() > k && v_moments.error.cols() > l ? v_moments.error(k, l) : 0.0;
            if (e == 0.0) continue;
            Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(order + 1, order + 1);
            unit(k, l) = 1.0;
            const Eigen::MatrixXcd c = invert_table(unit, noise_table.value, order);
            var += (c.cwiseAbs2() * (e * e));
        }
    }
    out.error = var.cwiseSqrt();
    out.shots = v_moments.shots;
    out.seed = v_moments.seed;
    return out;
}

MomentSet deconvolve_moments(const MomentSet& v_moments, const MomentSet& noise_reference) {
    const double n = estimate_noise_number(noise_reference);
    if (n < 0.0) warn("vacuum reference implies a negative noise number");
    const int order = std::min(v_moments.max_order, noise_reference.max_order);
    const MomentSet thermal = thermal_noise_moments(std::max(0.0, n), order);
    double worst = 0.0;
    for (int p = 0; p <= order; ++p) {
        for (int q = 0; p + q <= order; ++q) {
            const double err = noise_reference.error(p, q);
            if (err > 0.0) worst = std::max(worst, std::abs(noise_reference.value(p, q) - thermal.value(p, q)) / err);
        }
    }
    if (worst > 5.0) {
        std::ostringstream os;
        os << "vacuum reference deviates from a thermal noise mode by " << worst << " standard errors";
        warn(os.str());
    }
    return deconvolve_with_noise_table(v_moments, thermal);
}

G2Estimate g2(const MomentSet& a, double threshold) {
    if (a.max_order < 4) throw Error("g2 needs fourth-order moments");
    const double n1 = a.value(1, 1).real();
    if (!(n1 > threshold)) {
        std::ostringstream os;
        os << "<A†A> = " << n1 << " below threshold " << threshold;
        throw UndefinedG2(os.str());
    }
    const double n2 = a.value(2, 2).real();
    const double e1 = a.error(1, 1);
    const double e2 = a.error(2, 2);
    const double value = n2 / (n1 * n1);
    const double error = std::hypot(e2 / (n1 * n1), 2.0 * n2 * e1 / (n1 * n1 * n1));
    return {value, error};
}

}  // namespace shaping

#include "photon_shaping/device.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "photon_shaping/charge_basis.hpp"
#include "photon_shaping/diagnostics.hpp"
#include "photon_shaping/errors.hpp"

namespace shaping {

void DeviceParams::validate() const {
    auto require = [](bool ok, const char* field, const std::string& what) {
        if (!ok) throw ConfigError(field, what);
    };
    require(std::isfinite(omega_q) && omega_q > 0.0, "omega_q", "must be positive");
    require(std::isfinite(omega_r) && omega_r > 0.0, "omega_r", "must be positive");
    require(omega_q > omega_r, "omega_q", "must exceed omega_r (positive qubit-resonator detuning)");
    require(std::isfinite(g) && g >= 0.0, "g", "must be non-negative");
    require(std::isfinite(alpha) && std::abs(alpha) < omega_q, "alpha", "|alpha| must be below omega_q");
    require(std::isfinite(kappa) && kappa > 0.0, "kappa", "must be positive");
    require(t1_e > 0.0, "t1_e", "must be positive");
    require(t1_f > 0.0, "t1_f", "must be positive");
    require(t2_ge > 0.0, "t2_ge", "must be positive");
    require(t2_ef > 0.0, "t2_ef", "must be positive");
    require(t2_gf > 0.0, "t2_gf", "must be positive");
    require(n_transmon >= 3, "n_transmon", "need at least the g, e and f levels");
    require(n_resonator >= 2, "n_resonator", "need at least two Fock levels");
    if (model == TransmonModel::charge) {
        require(e_c.has_value() && *e_c > 0.0, "e_c", "charge model needs a positive E_C");
        require(!e_j.has_value() || *e_j > 0.0, "e_j", "must be positive");
    }
}

double DeviceParams::kappa_rate() const { return angular(kappa); }

std::string to_string(TransmonModel model) {
    return model == TransmonModel::kerr ? "kerr" : "charge";
}

TransmonLevels transmon_levels(const DeviceParams& params) {
    const int n = params.n_transmon;
    TransmonLevels out;
    out.energies.resize(n);
    out.ladder.resize(n - 1);
    if (params.model == TransmonModel::kerr) {
        for (int k = 0; k < n; ++k) {
            out.energies[k] = k * params.omega_q + 0.5 * params.alpha * k * (k - 1);
        }
        for (int k = 1; k < n; ++k) out.ladder[k - 1] = std::sqrt(static_cast<double>(k));
        return out;
    }
    const double e_c = params.e_c.value();
    const double e_j = params.e_j ? *params.e_j : tune_josephson_energy(e_c, params.omega_q, params.n_g);
    const ChargeBasisResult cb = transmon_charge_basis(e_c, e_j, params.n_g, n);
    out.energies = cb.energies;
    for (int k = 1; k < n; ++k) out.ladder[k - 1] = cb.charge_elements(k - 1, k);
    return out;
}

double drive_frequency(const DeviceParams& params) {
    const TransmonLevels lv = transmon_levels(params);
    return 2.0 * lv.omega_ge() + lv.anharmonicity() - params.omega_r;
}

FrameDetunings frame_detunings(const DeviceParams& params, double drive_offset) {
    const double wd = drive_frequency(params) + drive_offset;
    return {transmon_levels(params).omega_ge() - wd, params.omega_r - wd};
}

namespace {

// Static Hamiltonian (GHz) and lowering operator, sharing one level computation.
struct GhzParts {
    Matrix static_ghz;
    Matrix lowering;
    Eigen::VectorXd excitation;  // diagonal of b†b + a†a
};

GhzParts ghz_parts(const DeviceParams& params, const TransmonLevels& lv, double frame_ghz) {
    const CompositeBasis basis = params.basis();
    const int d = basis.dim();
    GhzParts out{Matrix::Zero(d, d), Matrix::Zero(d, d), Eigen::VectorXd::Zero(d)};
    for (int q = 0; q < basis.n_transmon(); ++q) {
        for (int n = 0; n < basis.n_resonator(); ++n) {
            const int i = basis.index(q, n);
            out.static_ghz(i, i) = lv.energies[q] - q * frame_ghz + n * (params.omega_r - frame_ghz);
            out.excitation(i) = q + n;
        }
    }
    for (int q = 1; q < basis.n_transmon(); ++q) {
        for (int n = 0; n < basis.n_resonator(); ++n) {
            out.lowering(basis.index(q - 1, n), basis.index(q, n)) = lv.ladder[q - 1];
        }
    }
    const Matrix a = resonator_annihilation(basis).matrix();
    out.static_ghz += params.g * (a * out.lowering.adjoint() + a.adjoint() * out.lowering);
    return out;
}

Matrix drive_term(const Matrix& lowering, cplx omega) {
    return 0.5 * (std::conj(omega) * lowering + omega * lowering.adjoint());
}

}  // namespace

HamiltonianParts hamiltonian_parts(const DeviceParams& params, double frame_ghz) {
    const CompositeBasis basis = params.basis();
    const GhzParts p = ghz_parts(params, transmon_levels(params), frame_ghz);
    return {Operator(basis, two_pi * p.static_ghz), Operator(basis, p.lowering)};
}

Operator hamiltonian_in_frame(const DeviceParams& params, double frame_ghz, cplx omega) {
    const GhzParts p = ghz_parts(params, transmon_levels(params), frame_ghz);
    return {params.basis(), two_pi * (p.static_ghz + drive_term(p.lowering, omega))};
}

Operator build_hamiltonian(const DeviceParams& params, cplx omega, double drive_offset) {
    return hamiltonian_in_frame(params, drive_frequency(params) + drive_offset, omega);
}

cplx effective_coupling_perturbative(const DeviceParams& params, cplx omega) {
    const TransmonLevels lv = transmon_levels(params);
    const double alpha = lv.anharmonicity();
    const double delta = lv.omega_ge() - params.omega_r;
    if (delta == 0.0 || delta + alpha == 0.0) {
        throw SingularDetuning("effective coupling undefined: Delta = " + std::to_string(delta) +
                               " GHz, Delta + alpha = " + std::to_string(delta + alpha) + " GHz");
    }
    const double small = 10.0 * params.g;
    if (std::abs(delta) < small || std::abs(delta + alpha) < small) {
        warn("second-order coupling used outside its validity range (|Delta|, |Delta+alpha| not >> g)");
    }
    const cplx coupling = params.g * alpha * omega / (std::sqrt(2.0) * delta * (delta + alpha));
    if (std::abs(coupling) > std::abs(alpha) / 10.0) {
        warn("requested effective coupling exceeds |alpha|/10");
    }
    return coupling;
}

double stark_shift_perturbative(const DeviceParams& params, double amplitude) {
    const TransmonLevels lv = transmon_levels(params);
    const FrameDetunings fd = frame_detunings(params);
    const double dq = fd.delta_q;
    const double alpha = lv.anharmonicity();
    const double l = lv.ladder.size() >= 2 ? lv.ladder[1] : std::sqrt(2.0);
    const double a2 = amplitude * amplitude / 4.0;
    // |f0⟩ pushed by |e0⟩ and |h0⟩, |g1⟩ pushed by |e1⟩.
    double f0 = a2 * l * l / (dq + alpha);
    if (lv.ladder.size() >= 3) {
        const double l3 = lv.ladder[2];
        f0 += a2 * l3 * l3 / (-dq - 2.0 * alpha);
    }
    const double l1 = lv.ladder[0];
    const double g1 = a2 * l1 * l1 / (-dq);
    return f0 - g1;
}

namespace {

// Dressed-pair machinery shared by resonance_curve, f0g1_block and dressed_spectrum.
class PairTracker {
public:
    PairTracker(const DeviceParams& params, const SpectrumOptions& options)
        : params_(params),
          options_(options),
          basis_(params.basis()),
          parts_(ghz_parts(params, transmon_levels(params), drive_frequency(params))),
          f0_(basis_.index(2, 0)),
          g1_(basis_.index(0, 1)) {}

    Matrix hamiltonian(cplx omega, double offset) const {
        Matrix h = parts_.static_ghz + drive_term(parts_.lowering, omega);
        h.diagonal() -= (offset * parts_.excitation).cast<cplx>();
        return h;
    }

    // Two eigenvectors of h best matching `reference` (columns span a 2D subspace).
    // Returns the minimum per-vector overlap.
    double select(const Matrix& h, const Matrix& reference, Matrix& chosen) const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        const Matrix& v = es.eigenvectors();
        Eigen::VectorXd ov = (reference.adjoint() * v).colwise().squaredNorm().transpose();
        std::vector<int> order(ov.size());
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + 2, order.end(),
                          [&](int a, int b) { return ov(a) > ov(b); });
        chosen.resize(h.rows(), 2);
        chosen.col(0) = v.col(order[0]);
        chosen.col(1) = v.col(order[1]);
        return std::min(ov(order[0]), ov(order[1]));
    }

    // Löwdin-orthonormalized projections of bare f0 and g1 onto the subspace.
    Eigen::Matrix2cd effective(const Matrix& h, const Matrix& subspace) const {
        Matrix bare = Matrix::Zero(h.rows(), 2);
        bare(f0_, 0) = 1.0;
        bare(g1_, 1) = 1.0;
        Matrix x = subspace * (subspace.adjoint() * bare);
        Eigen::Matrix2cd s = x.adjoint() * x;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(s);
        const Eigen::Matrix2cd inv_sqrt = es.eigenvectors() *
                                          es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                                          es.eigenvectors().adjoint();
        x = x * inv_sqrt;
        return x.adjoint() * h * x;
    }

    Matrix initial_subspace(double offset) const {
        Matrix bare = Matrix::Zero(basis_.dim(), 2);
        bare(f0_, 0) = 1.0;
        bare(g1_, 1) = 1.0;
        Matrix chosen;
        select(hamiltonian(0.0, offset), bare, chosen);
        return chosen;
    }

    // Advance the subspace from amplitude `from` to `to` (same phase) at fixed offset.
    Matrix continue_fixed(Matrix subspace, cplx phase, double from, double to, double offset) const {
        double amp = from;
        while (amp < to) {
            double h = std::min(options_.step, to - amp);
            int halvings = 0;
            for (;;) {
                Matrix next;
                const double ov = select(hamiltonian(phase * (amp + h), offset), subspace, next);
                if (ov >= options_.overlap_threshold) {
                    subspace = std::move(next);
                    amp += h;
                    break;
                }
                if (++halvings > options_.max_halvings) fail(amp + h);
                h *= 0.5;
            }
        }
        return subspace;
    }

    // Drive offset at which the dressed pair is resonant, and the subspace there.
    std::pair<double, Matrix> solve_resonance(cplx omega, const Matrix& reference, double guess,
                                              double& min_overlap) const {
        auto diff = [&](double offset, Matrix& chosen, double& ov) {
            const Matrix h = hamiltonian(omega, offset);
            ov = select(h, reference, chosen);
            const Eigen::Matrix2cd e = effective(h, chosen);
            return (e(0, 0) - e(1, 1)).real();
        };
        Matrix c0, c1;
        double ov0 = 0.0, ov1 = 0.0;
        double x0 = guess;
        double f0 = diff(x0, c0, ov0);
        double x1 = guess + 1e-4;
        double f1 = diff(x1, c1, ov1);
        for (int it = 0; it < 50 && std::abs(f1) > 1e-12; ++it) {
            if (f1 == f0) break;
            const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
            x0 = x1;
            f0 = f1;
            c0 = c1;
            ov0 = ov1;
            x1 = x2;
            f1 = diff(x1, c1, ov1);
        }
        if (std::abs(f1) > 1e-9) {
            throw TrackingFailure("f0/g1 resonance search did not converge at amplitude " +
                                  std::to_string(std::abs(omega)) + " GHz");
        }
        min_overlap = ov1;
        return {x1, c1};
    }

    [[noreturn]] void fail(double amp) const {
        std::ostringstream os;
        os << "adiabatic label tracking lost overlap near amplitude " << amp * 1e3 << " MHz";
        throw TrackingFailure(os.str());
    }

    const DeviceParams& params_;
    SpectrumOptions options_;
    CompositeBasis basis_;
    GhzParts parts_;
    int f0_;
    int g1_;
};

}  // namespace

Eigen::Matrix2cd f0g1_block(const DeviceParams& params, cplx omega, double drive_offset,
                            const SpectrumOptions& options) {
    const PairTracker t(params, options);
    const double amp = std::abs(omega);
    const cplx phase = amp > 0.0 ? omega / amp : cplx(1.0);
    const Matrix sub = t.continue_fixed(t.initial_subspace(drive_offset), phase, 0.0, amp, drive_offset);
    return t.effective(t.hamiltonian(omega, drive_offset), sub);
}

std::vector<ResonancePoint> resonance_curve(const DeviceParams& params,
                                            const std::vector<double>& amplitudes,
                                            const SpectrumOptions& options) {
    const PairTracker t(params, options);
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        if (amplitudes[i] < 0.0 || (i > 0 && amplitudes[i] < amplitudes[i - 1])) {
            throw Error("resonance_curve needs non-negative, non-decreasing amplitudes");
        }
    }

    double ov = 0.0;
    // At zero amplitude the pair decouples; the offset is the static transition shift.
    auto [offset, sub] = t.solve_resonance(0.0, t.initial_subspace(0.0), 0.0, ov);
    std::vector<ResonancePoint> out{{0.0, offset, 0.0}};

    double amp = 0.0;
    double slope = 0.0;
    for (double target : amplitudes) {
        while (amp < target) {
            double h = std::min(options.step, target - amp);
            int halvings = 0;
            for (;;) {
                const auto [next_offset, next_sub] =
                    t.solve_resonance(amp + h, sub, offset + slope * h, ov);
                if (ov >= options.overlap_threshold) {
                    slope = (next_offset - offset) / h;
                    offset = next_offset;
                    sub = next_sub;
                    amp += h;
                    break;
                }
                if (++halvings > options.max_halvings) t.fail(amp + h);
                h *= 0.5;
            }
        }
        if (target > 0.0) {
            const Eigen::Matrix2cd e = t.effective(t.hamiltonian(target, offset), sub);
            out.push_back({target, offset, e(0, 1)});
        }
    }
    return out;
}

double zero_amplitude_offset(const DeviceParams& params) {
    return resonance_curve(params, {}).front().offset;
}

namespace {

Matrix undriven_eigenvectors(const DeviceParams& params, Eigen::VectorXd* energies) {
    // Lab frame: no accidental degeneracies between excitation manifolds.
    const GhzParts p = ghz_parts(params, transmon_levels(params), 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(p.static_ghz);
    if (energies) *energies = es.eigenvalues();
    return es.eigenvectors();
}

int best_match(const Matrix& vectors, int flat_index) {
    int best = 0;
    vectors.row(flat_index).cwiseAbs().maxCoeff(&best);
    return best;
}

}  // namespace

Vector dressed_state(const DeviceParams& params, int transmon, int photons) {
    const Matrix v = undriven_eigenvectors(params, nullptr);
    Vector out = v.col(best_match(v, params.basis().index(transmon, photons)));
    // phase convention: positive overlap with the bare state
    const cplx c = out(params.basis().index(transmon, photons));
    return out * (std::abs(c) / c);
}

double dressed_resonator_frequency(const DeviceParams& params) {
    Eigen::VectorXd e;
    const Matrix v = undriven_eigenvectors(params, &e);
    const CompositeBasis b = params.basis();
    return e(best_match(v, b.index(0, 1))) - e(best_match(v, b.index(0, 0)));
}

double dressed_transmon_transition(const DeviceParams& params, int lower_level) {
    Eigen::VectorXd e;
    const Matrix v = undriven_eigenvectors(params, &e);
    const CompositeBasis b = params.basis();
    return e(best_match(v, b.index(lower_level + 1, 0))) - e(best_match(v, b.index(lower_level, 0)));
}

const DressedLevel& DressedSpectrum::level(int transmon, int photons) const {
    for (const auto& l : levels) {
        if (l.transmon == transmon && l.photons == photons) return l;
    }
    throw Error("no dressed level labelled (" + std::to_string(transmon) + ", " +
                std::to_string(photons) + ")");
}

DressedSpectrum dressed_spectrum(const DeviceParams& params, double amplitude,
                                 const SpectrumOptions& options) {
    if (amplitude < 0.0) throw Error("dressed_spectrum needs a non-negative amplitude");
    const auto curve = resonance_curve(params, {amplitude}, options);

    DressedSpectrum out;
    out.amplitude = amplitude;
    out.zero_amplitude_offset = curve.front().offset;
    out.resonance_offset = curve.back().offset;
    out.stark_shift = out.resonance_offset - out.zero_amplitude_offset;
    out.coupling = curve.back().coupling;

    // Label tracking in the frame of the reference drive frequency. The resonant
    // pairs (f,n)/(g,n+1) are tracked as 2D subspaces and reported through their
    // effective Hamiltonian; all other levels by maximal overlap.
    const CompositeBasis basis = params.basis();
    const int d = basis.dim();
    const PairTracker t(params, options);
    const double offset = out.zero_amplitude_offset;

    struct Group {
        std::vector<int> labels;  // flat bare indices
        Matrix vectors;
    };
    std::vector<Group> groups;
    std::vector<bool> grouped(d, false);
    for (int n = 0; n + 1 < basis.n_resonator(); ++n) {
        groups.push_back({{basis.index(2, n), basis.index(0, n + 1)}, {}});
        grouped[basis.index(2, n)] = grouped[basis.index(0, n + 1)] = true;
    }
    for (int i = 0; i < d; ++i) {
        if (!grouped[i]) groups.push_back({{i}, {}});
    }
    const Matrix v0 = undriven_eigenvectors(params, nullptr);
    for (auto& grp : groups) {
        grp.vectors.resize(d, static_cast<Eigen::Index>(grp.labels.size()));
        for (std::size_t k = 0; k < grp.labels.size(); ++k) {
            grp.vectors.col(static_cast<Eigen::Index>(k)) = v0.col(best_match(v0, grp.labels[k]));
        }
    }

    // Assign eigenvectors to groups by descending subspace overlap.
    auto assign = [&](const Matrix& h, std::vector<Group>& gs) -> double {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        const Matrix& v = es.eigenvectors();
        std::vector<bool> used(d, false);
        double worst = 1.0;
        std::vector<Matrix> next(gs.size());
        for (std::size_t gi = 0; gi < gs.size(); ++gi) {
            Eigen::VectorXd ov = (gs[gi].vectors.adjoint() * v).colwise().squaredNorm().transpose();
            const int want = static_cast<int>(gs[gi].labels.size());
            next[gi].resize(d, want);
            for (int k = 0; k < want; ++k) {
                int best = -1;
                for (int j = 0; j < d; ++j) {
                    if (!used[j] && (best < 0 || ov(j) > ov(best))) best = j;
                }
                used[best] = true;
                worst = std::min(worst, ov(best));
                next[gi].col(k) = v.col(best);
            }
        }
        for (std::size_t gi = 0; gi < gs.size(); ++gi) gs[gi].vectors = std::move(next[gi]);
        return worst;
    };

    double amp = 0.0;
    assign(t.hamiltonian(0.0, offset), groups);
    while (amp < amplitude) {
        double h = std::min(options.step, amplitude - amp);
        int halvings = 0;
        for (;;) {
            std::vector<Group> trial = groups;
            if (assign(t.hamiltonian(amp + h, offset), trial) >= options.overlap_threshold) {
                groups = std::move(trial);
                amp += h;
                break;
            }
            if (++halvings > options.max_halvings) t.fail(amp + h);
            h *= 0.5;
        }
    }

    const Matrix hfinal = t.hamiltonian(amplitude, offset);
    for (const auto& grp : groups) {
        if (grp.labels.size() == 1) {
            const auto [q, n] = basis.levels(grp.labels[0]);
            const cplx e = grp.vectors.col(0).dot(hfinal * grp.vectors.col(0));
            out.levels.push_back({q, n, e.real()});
        } else {
            // PairTracker::effective projects bare f0/g1; generalize to this pair.
            Matrix bare = Matrix::Zero(d, 2);
            bare(grp.labels[0], 0) = 1.0;
            bare(grp.labels[1], 1) = 1.0;
            Matrix x = grp.vectors * (grp.vectors.adjoint() * bare);
            Eigen::Matrix2cd s = x.adjoint() * x;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(s);
            x = x * (es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                     es.eigenvectors().adjoint());
            const Eigen::Matrix2cd e = x.adjoint() * hfinal * x;
            for (int k = 0; k < 2; ++k) {
                const auto [q, n] = basis.levels(grp.labels[k]);
                out.levels.push_back({q, n, e(k, k).real()});
            }
        }
    }
    std::sort(out.levels.begin(), out.levels.end(), [](const DressedLevel& a, const DressedLevel& b) {
        return std::pair(a.transmon, a.photons) < std::pair(b.transmon, b.photons);
    });
    return out;
}

}  // namespace shaping

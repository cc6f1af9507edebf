#include "photon_shaping/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "photon_shaping/diagnostics.hpp"
#include "photon_shaping/errors.hpp"

namespace shaping {

DephasingRates dephasing_rates(const DeviceParams& params) {
    DephasingRates r;
    r.gamma_ge = 1.0 / params.t2_ge - 0.5 / params.t1_e;
    if (r.gamma_ge < 0.0) {
        warn("T2_ge exceeds 2*T1_e; g-e pure dephasing clamped to 0");
        r.gamma_ge = 0.0;
    }
    r.gamma_f = 1.0 / params.t2_gf - 0.5 / params.t1_f - r.gamma_ge;
    if (r.gamma_f < 0.0) {
        warn("T2_gf inconsistent with T1_f and the g-e dephasing; f pure dephasing clamped to 0");
        r.gamma_f = 0.0;
    }
    r.t2_ef_model = 1.0 / (0.5 / params.t1_e + 0.5 / params.t1_f + r.gamma_f);
    return r;
}

std::vector<CollapseOperator> collapse_operators(const DeviceParams& params, const Decoherence& decoherence) {
    const CompositeBasis basis = params.basis();
    std::vector<CollapseOperator> out;
    if (decoherence.resonator_decay) {
        out.push_back({"resonator_decay", resonator_annihilation(basis), params.kappa_rate()});
    }
    if (decoherence.relaxation) {
        out.push_back({"relaxation_e", Operator::transmon_projector(basis, 0, 1), 1.0 / params.t1_e});
        out.push_back({"relaxation_f", Operator::transmon_projector(basis, 1, 2), 1.0 / params.t1_f});
    }
    if (decoherence.dephasing) {
        const DephasingRates r = dephasing_rates(params);
        Operator c1 = Operator::zero(basis);
        Operator c2 = Operator::zero(basis);
        for (int k = 1; k < basis.n_transmon(); ++k) c1 += Operator::transmon_projector(basis, k, k);
        for (int k = 2; k < basis.n_transmon(); ++k) c2 += Operator::transmon_projector(basis, k, k);
        out.push_back({"dephasing_e", std::move(c1), 2.0 * r.gamma_ge});
        out.push_back({"dephasing_f", std::move(c2), 2.0 * r.gamma_f});
    }
    return out;
}

double reference_drive_frequency(const DeviceParams& params) {
    return drive_frequency(params) + zero_amplitude_offset(params);
}

LindbladModel LindbladModel::emission(const DeviceParams& params, Envelope envelope,
                                      const Decoherence& decoherence, double drive_offset) {
    LindbladModel m;
    m.params = params;
    m.envelope = std::move(envelope);
    m.frame_ghz = reference_drive_frequency(params);
    m.carrier_offset = drive_offset;
    m.output_frame_ghz = dressed_resonator_frequency(params);
    m.decoherence = decoherence;
    return m;
}

std::vector<double> OutputRecord::population(int transmon, int photons) const {
    const int idx = basis.index(transmon, photons);
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) out[i] = populations(static_cast<Eigen::Index>(i), idx);
    return out;
}

std::vector<double> OutputRecord::transmon_population(int level) const {
    std::vector<double> out(times.size(), 0.0);
    for (int n = 0; n < basis.n_resonator(); ++n) {
        const int idx = basis.index(level, n);
        for (std::size_t i = 0; i < times.size(); ++i) out[i] += populations(static_cast<Eigen::Index>(i), idx);
    }
    return out;
}

double OutputRecord::final_population(int transmon, int photons) const {
    if (times.empty()) throw AnalysisError("empty output record");
    return populations(populations.rows() - 1, basis.index(transmon, photons));
}

double OutputRecord::final_transmon_population(int level) const {
    if (times.empty()) throw AnalysisError("empty output record");
    double p = 0.0;
    for (int n = 0; n < basis.n_resonator(); ++n) p += populations(populations.rows() - 1, basis.index(level, n));
    return p;
}

namespace {

struct Triplet {
    int row;
    int col;
    cplx val;
};

std::vector<Triplet> nonzeros(const Matrix& m, double scale = 1.0) {
    std::vector<Triplet> out;
    for (int j = 0; j < m.cols(); ++j) {
        for (int i = 0; i < m.rows(); ++i) {
            if (m(i, j) != 0.0) out.push_back({i, j, scale * m(i, j)});
        }
    }
    return out;
}

// Right-hand side of the master equation, specialized to the structure here:
// sparse Hamiltonian and jumps, diagonal dephasing folded into an elementwise factor.
class Liouvillian {
public:
    explicit Liouvillian(const LindbladModel& model) : d_(model.params.basis().dim()) {
        const HamiltonianParts parts = hamiltonian_parts(model.params, model.frame_ghz);
        Matrix k = parts.static_part.matrix();
        dephasing_ = Eigen::MatrixXd::Zero(d_, d_);
        for (const auto& c : collapse_operators(model.params, model.decoherence)) {
            if (c.rate == 0.0) continue;
            const Matrix& m = c.op.matrix();
            if (m.isDiagonal()) {
                // D[c]ρ_ij = −γ/2 (c_i − c_j)² ρ_ij for real diagonal c
                for (int i = 0; i < d_; ++i) {
                    for (int j = 0; j < d_; ++j) {
                        const double diff = (m(i, i) - m(j, j)).real();
                        dephasing_(i, j) -= 0.5 * c.rate * diff * diff;
                    }
                }
                continue;
            }
            k -= cplx(0.0, 0.5 * c.rate) * (m.adjoint() * m);
            jumps_.push_back(nonzeros(m, std::sqrt(c.rate)));
        }
        kernel_ = nonzeros(k);
        lowering_ = nonzeros(parts.lowering.matrix());
        m_.resize(d_, d_);
    }

    // out = L(ρ) for drive Ω (GHz).
    void apply(const Matrix& rho, cplx omega, Matrix& out) {
        m_.setZero();
        const int d = d_;
        for (const auto& t : kernel_) {
            for (int c = 0; c < d; ++c) m_(t.row, c) += t.val * rho(t.col, c);
        }
        if (omega != 0.0) {
            // H_drive = π(Ω* b + Ω b†) in rad/ns
            const cplx lo = std::numbers::pi * std::conj(omega);
            const cplx hi = std::numbers::pi * omega;
            for (const auto& t : lowering_) {
                const cplx a = lo * t.val;
                const cplx b = hi * std::conj(t.val);
                for (int c = 0; c < d; ++c) {
                    m_(t.row, c) += a * rho(t.col, c);
                    m_(t.col, c) += b * rho(t.row, c);
                }
            }
        }
        // −i(Kρ − ρK†) = −i(M − M†)
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < d; ++i) {
                const cplx v = m_(i, j) - std::conj(m_(j, i));
                out(i, j) = cplx(v.imag(), -v.real()) + dephasing_(i, j) * rho(i, j);
            }
        }
        for (const auto& jump : jumps_) {
            for (const auto& p : jump) {
                for (const auto& q : jump) {
                    out(p.row, q.row) += p.val * std::conj(q.val) * rho(p.col, q.col);
                }
            }
        }
    }

private:
    int d_;
    std::vector<Triplet> kernel_;
    std::vector<Triplet> lowering_;
    std::vector<std::vector<Triplet>> jumps_;
    Eigen::MatrixXd dephasing_;
    Matrix m_;
};

cplx trace_product(const std::vector<Triplet>& op, const Matrix& rho) {
    cplx s = 0.0;
    for (const auto& t : op) s += t.val * rho(t.col, t.row);
    return s;
}

}  // namespace

Propagation propagate(const LindbladModel& model, const Matrix& rho0, double t_start, double t_end,
                      const PropagateOptions& options) {
    const CompositeBasis basis = model.params.basis();
    const int d = basis.dim();
    if (rho0.rows() != d || rho0.cols() != d) throw DimensionMismatch("initial state does not match the model basis");
    if (!(options.dt > 0.0) || !(options.stride > 0.0)) throw Error("dt and stride must be positive");
    if (!(t_end > t_start)) throw Error("propagation needs t_end > t_start");

    const long steps = std::max(1L, std::lround((t_end - t_start) / options.dt));
    const double dt = (t_end - t_start) / static_cast<double>(steps);
    const long every = std::max(1L, std::lround(options.stride / dt));
    const double kappa = model.params.kappa_rate();

    Liouvillian lv(model);
    const auto a_ops = nonzeros(resonator_annihilation(basis).matrix());
    const auto b_ops = nonzeros(hamiltonian_parts(model.params, model.frame_ghz).lowering.matrix());
    Eigen::VectorXd n_res(d), n_tot(d);
    for (int i = 0; i < d; ++i) {
        const auto [q, n] = basis.levels(i);
        n_res(i) = n;
        n_tot(i) = q + n;
    }
    // ⟨b†b⟩ with the model's ladder is not q for the charge model; the bookkeeping
    // counts excitations, which is what the drive flux changes.

    const double t_env = model.envelope.t0();
    auto drive = [&](double t) -> cplx {
        cplx w = model.envelope.at(t);
        if (w != 0.0 && model.carrier_offset != 0.0) w *= std::polar(1.0, -two_pi * model.carrier_offset * (t - t_env));
        return w;
    };
    auto flux = [&](const Matrix& rho, cplx omega) {
        return -two_pi * (std::conj(omega) * trace_product(b_ops, rho)).imag();
    };
    auto photons = [&](const Matrix& rho) { return (rho.diagonal().real().array() * n_res.array()).sum(); };

    Propagation out;
    OutputRecord& rec = out.record;
    rec.basis = basis;
    const long n_records = steps / every + 2;
    rec.times.reserve(n_records);
    rec.a_out.reserve(n_records);
    rec.power.reserve(n_records);
    rec.populations.resize(n_records, d);
    rec.min_probe_eigenvalue = 1.0;

    const double frame_shift = model.output_frame_ghz - model.frame_ghz;
    auto record = [&](double t, const Matrix& rho) {
        const auto row = static_cast<Eigen::Index>(rec.times.size());
        rec.times.push_back(t);
        rec.a_out.push_back(std::sqrt(kappa) * trace_product(a_ops, rho) * std::polar(1.0, two_pi * frame_shift * t));
        rec.power.push_back(kappa * photons(rho));
        rec.populations.row(row) = rho.diagonal().real().transpose();
        const double drift = std::abs(rho.trace() - 1.0);
        rec.max_trace_drift = std::max(rec.max_trace_drift, drift);
        if (drift > options.trace_tol) {
            std::ostringstream os;
            os << "trace drift " << drift << " at t = " << t << " ns; reduce dt";
            throw StepSizeFailure(os.str(), t);
        }
    };

    std::vector<long> probes;
    for (int k = 1; k <= options.positivity_probes; ++k) probes.push_back(steps * k / options.positivity_probes);
    auto probe = [&](long step, double t, const Matrix& rho) {
        if (!std::binary_search(probes.begin(), probes.end(), step)) return;
        const double ev = min_hermitian_eigenvalue(0.5 * (rho + rho.adjoint()));
        rec.min_probe_eigenvalue = std::min(rec.min_probe_eigenvalue, ev);
        if (options.keep_snapshots) out.snapshots.push_back({t, rho});
        if (ev < -options.positivity_tol) {
            std::ostringstream os;
            os << "density matrix eigenvalue " << ev << " at t = " << t << " ns; reduce dt";
            throw StepSizeFailure(os.str(), t);
        }
    };

    Matrix rho = rho0;
    Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
    rec.excitation_start = (rho.diagonal().real().array() * n_tot.array()).sum();
    record(t_start, rho);

    for (long s = 1; s <= steps; ++s) {
        const double t = t_start + dt * static_cast<double>(s - 1);
        const cplx w1 = drive(t);
        const cplx w2 = drive(t + 0.5 * dt);
        const cplx w4 = drive(t + dt);

        double work = 0.0;
        double pw = 0.0;
        lv.apply(rho, w1, k1);
        work += flux(rho, w1);
        pw += photons(rho);
        tmp = rho + (0.5 * dt) * k1;
        lv.apply(tmp, w2, k2);
        work += 2.0 * flux(tmp, w2);
        pw += 2.0 * photons(tmp);
        tmp = rho + (0.5 * dt) * k2;
        lv.apply(tmp, w2, k3);
        work += 2.0 * flux(tmp, w2);
        pw += 2.0 * photons(tmp);
        tmp = rho + dt * k3;
        lv.apply(tmp, w4, k4);
        work += flux(tmp, w4);
        pw += photons(tmp);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        // Same quadrature weights as the state update, so the balance closes exactly.
        rec.drive_work += dt / 6.0 * work;
        rec.emitted += dt / 6.0 * kappa * pw;

        const double tn = t_start + dt * static_cast<double>(s);
        if (s % every == 0 || s == steps) record(tn, rho);
        probe(s, tn, rho);
    }
    rec.populations.conservativeResize(static_cast<Eigen::Index>(rec.times.size()), d);
    rec.excitation_end = (rho.diagonal().real().array() * n_tot.array()).sum();
    out.final_state = std::move(rho);
    return out;
}

Propagation propagate(const LindbladModel& model, const Matrix& rho0, double t_end, const PropagateOptions& options) {
    return propagate(model, rho0, model.envelope.t0(), t_end, options);
}

Propagation propagate(const LindbladModel& model, const State& rho0, double t_end, const PropagateOptions& options) {
    if (!(rho0.basis() == model.params.basis())) throw DimensionMismatch("state basis differs from the model basis");
    return propagate(model, rho0.rho(), t_end, options);
}

Matrix initial_density(const DeviceParams& params, InitialState initial) {
    Vector psi = dressed_state(params, 2, 0);
    if (initial == InitialState::g0_plus_f0) psi = (dressed_state(params, 0, 0) + psi) / std::numbers::sqrt2;
    psi.normalize();
    return psi * psi.adjoint();
}

OutputRecord emit_photon(const DeviceParams& params, const Envelope& envelope, InitialState initial,
                         const EmissionOptions& options) {
    if (envelope.empty()) throw EnvelopeError("empty drive envelope");
    const LindbladModel model = LindbladModel::emission(params, envelope, options.decoherence, options.drive_offset);
    const double t_end = envelope.t_end() + options.tail_kappa / params.kappa_rate();
    return propagate(model, initial_density(params, initial), t_end, options.propagate).record;
}

}  // namespace shaping

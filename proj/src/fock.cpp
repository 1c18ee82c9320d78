#include "cslink/fock.hpp"
#include <cstdio>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cslink/errors.hpp"

namespace cslink {

namespace {

// Offsets of all basis states whose digits vanish on the given subsystems.
std::vector<std::ptrdiff_t> outer_offsets(const HybridState& s, int sub_a,
                                          int sub_b) {
    const SystemLayout& lay = s.layout();
    std::vector<std::ptrdiff_t> offsets{0};
    for (int sub = 0; sub < lay.n_subsystems(); ++sub) {
        if (sub == sub_a || sub == sub_b) continue;
        const int d = lay.subsystem_dim(sub);
        if (d == 1) continue;
        const std::ptrdiff_t stride = s.stride(sub);
        std::vector<std::ptrdiff_t> next;
        next.reserve(offsets.size() * d);
        for (std::ptrdiff_t o : offsets)
            for (int k = 0; k < d; ++k) next.push_back(o + k * stride);
        offsets.swap(next);
    }
    return offsets;
}

// exp(theta (a'b - ab')) restricted to the total-photon-number-n block,
// basis |k>_a |n-k>_b with k = 0..n. Real orthogonal.
Eigen::MatrixXcd beamsplitter_block(int n, double theta) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    for (int k = 0; k < n; ++k) {
        const double c = std::sqrt((k + 1.0) * (n - k));
        h(k + 1, k) = Complex(0.0, 1.0) * c;
        h(k, k + 1) = Complex(0.0, -1.0) * c;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases(n + 1);
    for (int i = 0; i <= n; ++i)
        phases(i) = std::exp(Complex(0.0, -theta * es.eigenvalues()(i)));
    const Eigen::MatrixXcd u =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return u.real().cast<Complex>();
}

}  // namespace

int fock_cutoff_for_tail(double mu, double tail_tol) {
    if (!(mu >= 0.0) || !(tail_tol > 0.0)) {
        throw std::domain_error("fock_cutoff_for_tail: bad arguments");
    }
    if (mu == 0.0) return 0;
    double term = std::exp(-mu);
    double cum = term;
    int n = 0;
    while (1.0 - cum > tail_tol && n < 100000) {
        ++n;
        term *= mu / n;
        cum += term;
    }
    return n;
}

int default_cutoff(double mu) {
    if (!(mu >= 0.0)) throw std::domain_error("default_cutoff: mean must be >= 0");
    return static_cast<int>(std::ceil(mu + 10.0 * std::sqrt(mu) + 10.0));
}

Eigen::VectorXcd coherent_state_vector(Complex alpha, int cutoff,
                                       double tail_tol) {
    if (cutoff < 0) throw std::domain_error("coherent_state_vector: cutoff < 0");
    Eigen::VectorXcd v(cutoff + 1);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= cutoff; ++n) v(n) = v(n - 1) * alpha / std::sqrt(double(n));
    const double deficit = 1.0 - v.squaredNorm();
    if (deficit > tail_tol) {
        char msg[96];
        std::snprintf(msg, sizeof msg,
                      "coherent_state_vector: Poisson tail %.3e exceeds tolerance",
                      deficit);
        throw truncation_error(msg,
                               fock_cutoff_for_tail(std::norm(alpha), tail_tol));
    }
    return v;
}

int SystemLayout::subsystem_dim(int s) const {
    return s < n_qubits ? 2 : mode_cutoffs[s - n_qubits] + 1;
}

std::ptrdiff_t SystemLayout::dimension() const {
    std::ptrdiff_t d = std::ptrdiff_t(1) << n_qubits;
    for (int c : mode_cutoffs) d *= (c + 1);
    return d;
}

HybridState::HybridState(SystemLayout layout, std::size_t amplitude_cap)
    : layout_(std::move(layout)), amplitude_cap_(amplitude_cap) {
    for (int c : layout_.mode_cutoffs) {
        if (c < 0) throw std::domain_error("HybridState: negative cutoff");
    }
    check_cap(layout_.dimension());
    rebuild_strides();
    occupancy_.assign(layout_.n_modes(), 0);
    amp_ = Eigen::VectorXcd::Zero(layout_.dimension());
    amp_(0) = 1.0;  // |0...0> x |vac...>
}

void HybridState::rebuild_strides() {
    const int ns = layout_.n_subsystems();
    strides_.assign(ns, 1);
    for (int s = ns - 2; s >= 0; --s) {
        strides_[s] = strides_[s + 1] * layout_.subsystem_dim(s + 1);
    }
}

void HybridState::check_cap(std::ptrdiff_t dim) const {
    if (dim <= 0 || static_cast<std::size_t>(dim) > amplitude_cap_) {
        throw std::length_error("HybridState: dimension " + std::to_string(dim) +
                                " exceeds amplitude cap " +
                                std::to_string(amplitude_cap_));
    }
}

void HybridState::set_mode_occupancy_bound(int m, int occ) {
    occupancy_[m] = std::min(occ, layout_.mode_cutoffs[m]);
}

void HybridState::set_mode_coherent(int mode, Complex alpha, double tail_tol) {
    if (mode < 0 || mode >= layout_.n_modes()) {
        throw std::out_of_range("set_mode_coherent: bad mode index");
    }
    if (occupancy_[mode] != 0) {
        throw std::invalid_argument("set_mode_coherent: mode is not in vacuum");
    }
    const int cutoff = layout_.mode_cutoffs[mode];
    const Eigen::VectorXcd coeff = coherent_state_vector(alpha, cutoff, tail_tol);
    const std::ptrdiff_t stride = mode_stride(mode);
    for (std::ptrdiff_t o : outer_offsets(*this, layout_.n_qubits + mode,
                                          layout_.n_qubits + mode)) {
        const Complex base = amp_(o);
        if (base == Complex(0.0, 0.0)) continue;
        for (int n = cutoff; n >= 0; --n) amp_(o + n * stride) = base * coeff(n);
    }
    occupancy_[mode] = cutoff;
}

void HybridState::append_mode(int cutoff) {
    if (cutoff < 0) throw std::domain_error("append_mode: negative cutoff");
    const std::ptrdiff_t old_dim = amp_.size();
    const std::ptrdiff_t d = cutoff + 1;
    check_cap(old_dim * d);
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(old_dim * d);
    for (std::ptrdiff_t i = 0; i < old_dim; ++i) next(i * d) = amp_(i);
    amp_.swap(next);
    layout_.mode_cutoffs.push_back(cutoff);
    occupancy_.push_back(0);
    rebuild_strides();
}

double HybridState::resize_mode(int mode, int new_cutoff) {
    if (new_cutoff < 0) throw std::domain_error("resize_mode: negative cutoff");
    const int old_cutoff = layout_.mode_cutoffs[mode];
    if (new_cutoff == old_cutoff) return 0.0;
    const std::ptrdiff_t s = mode_stride(mode);
    const std::ptrdiff_t d_old = old_cutoff + 1;
    const std::ptrdiff_t d_new = new_cutoff + 1;
    const std::ptrdiff_t n_pre = amp_.size() / (s * d_old);
    check_cap(n_pre * d_new * s);
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(n_pre * d_new * s);
    double clipped = 0.0;
    for (std::ptrdiff_t pre = 0; pre < n_pre; ++pre) {
        for (std::ptrdiff_t n = 0; n < d_old; ++n) {
            const std::ptrdiff_t src = (pre * d_old + n) * s;
            if (n < d_new) {
                next.segment((pre * d_new + n) * s, s) = amp_.segment(src, s);
            } else {
                clipped += amp_.segment(src, s).squaredNorm();
            }
        }
    }
    amp_.swap(next);
    layout_.mode_cutoffs[mode] = new_cutoff;
    occupancy_[mode] = std::min(occupancy_[mode], new_cutoff);
    rebuild_strides();
    norm_deficit_ += clipped;
    return clipped;
}

void apply_qubit_gate(HybridState& state, int qubit, const Eigen::Matrix2cd& u) {
    if (qubit < 0 || qubit >= state.layout().n_qubits) {
        throw std::out_of_range("apply_qubit_gate: bad qubit index");
    }
    const std::ptrdiff_t s = state.qubit_stride(qubit);
    auto& amp = state.amplitudes();
    for (std::ptrdiff_t idx = 0; idx < amp.size(); ++idx) {
        if ((idx / s) % 2 != 0) continue;
        const Complex a0 = amp(idx);
        const Complex a1 = amp(idx + s);
        amp(idx) = u(0, 0) * a0 + u(0, 1) * a1;
        amp(idx + s) = u(1, 0) * a0 + u(1, 1) * a1;
    }
}

void apply_hadamard(HybridState& state, int qubit) {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd h;
    h << s, s, s, -s;
    apply_qubit_gate(state, qubit, h);
}

void apply_controlled_pi(HybridState& state, int qubit, int mode) {
    const SystemLayout& lay = state.layout();
    if (qubit < 0 || qubit >= lay.n_qubits || mode < 0 || mode >= lay.n_modes()) {
        throw std::out_of_range("apply_controlled_pi: bad index");
    }
    const std::ptrdiff_t sq = state.qubit_stride(qubit);
    const std::ptrdiff_t sm = state.mode_stride(mode);
    const std::ptrdiff_t dm = lay.mode_cutoffs[mode] + 1;
    auto& amp = state.amplitudes();
    for (std::ptrdiff_t idx = 0; idx < amp.size(); ++idx) {
        if ((idx / sq) % 2 == 1 && ((idx / sm) % dm) % 2 == 1) amp(idx) = -amp(idx);
    }
}

void apply_beamsplitter(HybridState& state, int mode_a, int mode_b,
                        double transmissivity) {
    const SystemLayout& lay = state.layout();
    if (mode_a == mode_b || mode_a < 0 || mode_b < 0 ||
        mode_a >= lay.n_modes() || mode_b >= lay.n_modes()) {
        throw std::out_of_range("apply_beamsplitter: bad mode indices");
    }
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
        throw std::domain_error("apply_beamsplitter: transmissivity not in [0,1]");
    }
    const int cutoff = lay.mode_cutoffs[mode_a];
    if (lay.mode_cutoffs[mode_b] != cutoff) {
        throw std::invalid_argument("apply_beamsplitter: unequal mode cutoffs");
    }
    const double theta = std::acos(std::min(1.0, std::sqrt(transmissivity)));
    if (theta == 0.0) return;  // transmissivity 1: identity

    const int occ_a = state.mode_occupancy_bound(mode_a);
    const int occ_b = state.mode_occupancy_bound(mode_b);
    const int n_max = std::min(occ_a + occ_b, 2 * cutoff);

    std::vector<Eigen::MatrixXcd> blocks(n_max + 1);
    for (int n = 0; n <= n_max; ++n) blocks[n] = beamsplitter_block(n, theta);

    const std::ptrdiff_t sa = state.mode_stride(mode_a);
    const std::ptrdiff_t sb = state.mode_stride(mode_b);
    auto& amp = state.amplitudes();
    double clipped = 0.0;
    Eigen::VectorXcd vin, vout;
    for (std::ptrdiff_t o : outer_offsets(state, lay.n_qubits + mode_a,
                                          lay.n_qubits + mode_b)) {
        for (int n = 0; n <= n_max; ++n) {
            const int klo = std::max(0, n - cutoff);
            const int khi = std::min(n, cutoff);
            const int len = khi - klo + 1;
            vin.resize(len);
            for (int k = klo; k <= khi; ++k)
                vin(k - klo) = amp(o + k * sa + std::ptrdiff_t(n - k) * sb);
            if (len == n + 1) {
                vout.noalias() = blocks[n] * vin;
            } else {
                // Photon-number block only partially representable at this
                // cutoff; the restriction is a projection, weight beyond the
                // cutoff is dropped.
                vout.noalias() = blocks[n].block(klo, klo, len, len) * vin;
                clipped += vin.squaredNorm() - vout.squaredNorm();
            }
            for (int k = klo; k <= khi; ++k)
                amp(o + k * sa + std::ptrdiff_t(n - k) * sb) = vout(k - klo);
        }
    }
    state.add_norm_deficit(std::max(0.0, clipped));
    state.set_mode_occupancy_bound(mode_a, n_max);
    state.set_mode_occupancy_bound(mode_b, n_max);
}

void apply_loss(HybridState& state, int mode, double transmissivity,
                int env_mode) {
    if (state.mode_occupancy_bound(env_mode) != 0) {
        throw std::invalid_argument("apply_loss: environment mode not in vacuum");
    }
    // (env, mode) ordering sends a coherent alpha to alpha sqrt(1-eta) in the
    // environment and alpha sqrt(eta) in the surviving mode, both upright.
    apply_beamsplitter(state, env_mode, mode, transmissivity);
}

Eigen::MatrixXcd trace_out(const HybridState& state,
                           const std::vector<int>& traced_subsystems) {
    const SystemLayout& lay = state.layout();
    const int ns = lay.n_subsystems();
    std::vector<bool> traced(ns, false);
    for (int t : traced_subsystems) {
        if (t < 0 || t >= ns) throw std::out_of_range("trace_out: bad subsystem");
        if (traced[t]) throw std::invalid_argument("trace_out: duplicate subsystem");
        traced[t] = true;
    }
    std::vector<std::ptrdiff_t> w_r(ns, 0), w_t(ns, 0);
    std::ptrdiff_t r_dim = 1, t_dim = 1;
    for (int s = ns - 1; s >= 0; --s) {
        if (traced[s]) {
            w_t[s] = t_dim;
            t_dim *= lay.subsystem_dim(s);
        } else {
            w_r[s] = r_dim;
            r_dim *= lay.subsystem_dim(s);
        }
    }
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(r_dim, t_dim);
    const auto& amp = state.amplitudes();
    for (std::ptrdiff_t idx = 0; idx < amp.size(); ++idx) {
        if (amp(idx) == Complex(0.0, 0.0)) continue;
        std::ptrdiff_t r = 0, t = 0;
        for (int s = 0; s < ns; ++s) {
            const std::ptrdiff_t digit =
                (idx / state.stride(s)) % lay.subsystem_dim(s);
            if (traced[s]) {
                t += digit * w_t[s];
            } else {
                r += digit * w_r[s];
            }
        }
        a(r, t) = amp(idx);
    }
    return a * a.adjoint();
}

std::vector<PnrOutcome> measure_pnr(const HybridState& state, int mode) {
    const SystemLayout& lay = state.layout();
    if (mode < 0 || mode >= lay.n_modes()) {
        throw std::out_of_range("measure_pnr: bad mode index");
    }
    const int cutoff = lay.mode_cutoffs[mode];
    const std::ptrdiff_t s = state.mode_stride(mode);
    const std::ptrdiff_t d = cutoff + 1;
    const auto& amp = state.amplitudes();

    std::vector<double> prob(cutoff + 1, 0.0);
    for (std::ptrdiff_t idx = 0; idx < amp.size(); ++idx) {
        prob[(idx / s) % d] += std::norm(amp(idx));
    }

    std::vector<PnrOutcome> out;
    out.reserve(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) {
        PnrOutcome o{n, prob[n], state};
        auto& a = o.state.amplitudes();
        for (std::ptrdiff_t idx = 0; idx < a.size(); ++idx) {
            if ((idx / s) % d != n) a(idx) = 0.0;
        }
        if (prob[n] > 0.0) a /= std::sqrt(prob[n]);
        o.state.set_mode_occupancy_bound(mode, n);
        out.push_back(std::move(o));
    }
    return out;
}

double CountDistribution::total_probability() const {
    double t = 0.0;
    for (const auto& b : blocks) t += b.trace().real();
    return t;
}

CountDistribution CountDistribution::zero(int max1, int max2) {
    CountDistribution cd;
    cd.max_count_1 = max1;
    cd.max_count_2 = max2;
    cd.blocks.assign(static_cast<std::size_t>(max1 + 1) * (max2 + 1),
                     Eigen::Matrix4cd::Zero());
    return cd;
}

CountDistribution herald_counts(const HybridState& state, int detector_mode_1,
                                int detector_mode_2) {
    return herald_counts(state, std::vector<int>{detector_mode_1},
                         std::vector<int>{detector_mode_2});
}

CountDistribution herald_counts(const HybridState& state,
                                const std::vector<int>& detector_modes_1,
                                const std::vector<int>& detector_modes_2) {
    const SystemLayout& lay = state.layout();
    if (lay.n_qubits != 2) {
        throw std::invalid_argument("herald_counts: expects exactly 2 qubits");
    }
    for (int m1 : detector_modes_1)
        for (int m2 : detector_modes_2)
            if (m1 == m2)
                throw std::invalid_argument("herald_counts: detectors share a mode");

    int occ1 = 0, occ2 = 0;
    for (int m : detector_modes_1) occ1 += state.mode_occupancy_bound(m);
    for (int m : detector_modes_2) occ2 += state.mode_occupancy_bound(m);
    CountDistribution cd = CountDistribution::zero(occ1, occ2);

    struct ModeRef {
        std::ptrdiff_t stride;
        std::ptrdiff_t dim;
    };
    auto refs = [&](const std::vector<int>& modes) {
        std::vector<ModeRef> r;
        for (int m : modes)
            r.push_back({state.mode_stride(m), lay.mode_cutoffs[m] + 1});
        return r;
    };
    const std::vector<ModeRef> det1 = refs(detector_modes_1);
    const std::vector<ModeRef> det2 = refs(detector_modes_2);

    const std::ptrdiff_t s0 = state.qubit_stride(0);
    const std::ptrdiff_t s1 = state.qubit_stride(1);
    const auto& amp = state.amplitudes();
    const std::ptrdiff_t slab = amp.size() / 4;  // qubits are the leading subsystems

    Eigen::Vector4cd v;
    for (std::ptrdiff_t b = 0; b < slab; ++b) {
        v << amp(b), amp(b + s1), amp(b + s0), amp(b + s0 + s1);
        if (v.squaredNorm() == 0.0) continue;
        int c1 = 0, c2 = 0;
        for (const ModeRef& m : det1) c1 += static_cast<int>((b / m.stride) % m.dim);
        for (const ModeRef& m : det2) c2 += static_cast<int>((b / m.stride) % m.dim);
        if (c1 > occ1 || c2 > occ2) continue;
        cd.block(c1, c2).noalias() += v * v.adjoint();
    }
    return cd;
}

CountDistribution apply_dark_counts(const CountDistribution& counts,
                                    double p_dark) {
    if (!(p_dark >= 0.0 && p_dark < 0.5)) {
        throw std::domain_error("apply_dark_counts: p_dark must be in [0, 0.5)");
    }
    if (p_dark == 0.0) return counts;
    CountDistribution out =
        CountDistribution::zero(counts.max_count_1 + 1, counts.max_count_2 + 1);
    const double w[2] = {1.0 - p_dark, p_dark};
    for (int c1 = 0; c1 <= counts.max_count_1; ++c1) {
        for (int c2 = 0; c2 <= counts.max_count_2; ++c2) {
            const Eigen::Matrix4cd& b = counts.block(c1, c2);
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2)
                    out.block(c1 + b1, c2 + b2) += w[b1] * w[b2] * b;
        }
    }
    return out;
}

HelstromPovm helstrom_measurement(const Eigen::VectorXcd& state_plus,
                                  const Eigen::VectorXcd& state_minus) {
    if (state_plus.size() != state_minus.size()) {
        throw std::invalid_argument("helstrom_measurement: size mismatch");
    }
    if (std::abs(state_plus.norm() - 1.0) > 1e-6 ||
        std::abs(state_minus.norm() - 1.0) > 1e-6) {
        throw std::invalid_argument("helstrom_measurement: states not normalized");
    }
    const Eigen::MatrixXcd m = state_plus * state_plus.adjoint() -
                               state_minus * state_minus.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    const std::ptrdiff_t dim = state_plus.size();
    Eigen::MatrixXcd plus = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::ptrdiff_t i = 0; i < dim; ++i) {
        if (es.eigenvalues()(i) >= -1e-12) {  // zero eigenspace goes to "plus"
            plus.noalias() +=
                es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
        }
    }
    HelstromPovm povm;
    povm.plus = plus;
    povm.minus = Eigen::MatrixXcd::Identity(dim, dim) - plus;
    povm.error_probability =
        0.5 * ((state_plus.adjoint() * povm.minus * state_plus).value().real() +
               (state_minus.adjoint() * povm.plus * state_minus).value().real());
    return povm;
}

}  // namespace cslink

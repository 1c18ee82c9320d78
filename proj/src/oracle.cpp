#include "cslink/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cslink/errors.hpp"

namespace cslink {

namespace {

constexpr double kDeficitBudget = 1e-9;

void validate_protocol_inputs(double alpha, double eta) {
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw std::domain_error("oracle: alpha must be finite and >= 0");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("oracle: eta must be in (0, 1]");
    }
}

void check_deficit(const HybridState& state, int pulse_cutoff) {
    if (state.norm_deficit() > kDeficitBudget) {
        throw truncation_error("oracle: truncation loss " +
                                   std::to_string(state.norm_deficit()) +
                                   " exceeds budget",
                               pulse_cutoff + 5);
    }
}

HeraldOutcome make_outcome(HeraldLabel label, const Eigen::Matrix4cd& accum) {
    HeraldOutcome o;
    o.label = label;
    o.probability = accum.trace().real();
    o.state = o.probability > 0.0 ? Eigen::Matrix4cd(accum / o.probability)
                                  : Eigen::Matrix4cd::Zero();
    return o;
}

// rho -> (rho + ZZ rho ZZ)/2: removes coherence between the even- and
// odd-parity memory sectors.
Eigen::Matrix4cd dephase_memory_parity(const Eigen::Matrix4cd& rho) {
    Eigen::Vector4cd z;
    z << 1.0, -1.0, -1.0, 1.0;
    const Eigen::Matrix4cd zz = z.asDiagonal();
    return 0.5 * (rho + zz * rho * zz);
}

}  // namespace

const HeraldOutcome& OracleRun::outcome(HeraldLabel label) const {
    for (const auto& o : outcomes) {
        if (o.label == label) return o;
    }
    throw std::out_of_range("OracleRun: no outcome with requested label");
}

std::vector<HeraldOutcome> classify_pnr_parity(const CountDistribution& cd) {
    Eigen::Matrix4cd d1e = Eigen::Matrix4cd::Zero(), d1o = d1e, d2e = d1e,
                     d2o = d1e, none = d1e, ambiguous = d1e;
    for (int c1 = 0; c1 <= cd.max_count_1; ++c1) {
        for (int c2 = 0; c2 <= cd.max_count_2; ++c2) {
            const auto& b = cd.block(c1, c2);
            if (c1 == 0 && c2 == 0) {
                none += b;
            } else if (c1 > 0 && c2 > 0) {
                ambiguous += b;
            } else if (c2 == 0) {
                (c1 % 2 == 0 ? d1e : d1o) += b;
            } else {
                (c2 % 2 == 0 ? d2e : d2o) += b;
            }
        }
    }
    return {make_outcome(HeraldLabel::D1Even, d1e),
            make_outcome(HeraldLabel::D1Odd, d1o),
            make_outcome(HeraldLabel::D2Even, d2e),
            make_outcome(HeraldLabel::D2Odd, d2o),
            make_outcome(HeraldLabel::NoClick, none),
            make_outcome(HeraldLabel::Ambiguous, ambiguous)};
}

std::vector<HeraldOutcome> classify_onoff(const CountDistribution& cd) {
    Eigen::Matrix4cd d1 = Eigen::Matrix4cd::Zero(), d2 = d1, none = d1,
                     ambiguous = d1;
    for (int c1 = 0; c1 <= cd.max_count_1; ++c1) {
        for (int c2 = 0; c2 <= cd.max_count_2; ++c2) {
            const auto& b = cd.block(c1, c2);
            if (c1 == 0 && c2 == 0) {
                none += b;
            } else if (c1 > 0 && c2 > 0) {
                ambiguous += b;
            } else if (c1 > 0) {
                d1 += b;
            } else {
                d2 += b;
            }
        }
    }
    return {make_outcome(HeraldLabel::D1Click, d1),
            make_outcome(HeraldLabel::D2Click, d2),
            make_outcome(HeraldLabel::NoClick, none),
            make_outcome(HeraldLabel::Ambiguous, ambiguous)};
}

double clean_herald_probability(const CountDistribution& cd) {
    double clean = 0.0;
    for (int c1 = 0; c1 <= cd.max_count_1; ++c1) {
        for (int c2 = 0; c2 <= cd.max_count_2; ++c2) {
            if ((c1 == 0) == (c2 == 0)) continue;  // no-click or ambiguous
            const auto& b = cd.block(c1, c2);
            if (c2 == 0) {
                clean += b(0, 0).real() + b(3, 3).real();  // even parity at D1
            } else {
                clean += b(1, 1).real() + b(2, 2).real();  // odd parity at D2
            }
        }
    }
    return clean;
}

namespace {

// Shared CTW pipeline: two memories, pulse amplitudes alpha_a / alpha_b,
// per-arm loss sqrt(eta), balanced interference, dual PNR.
OracleRun run_ctw_pipeline(double alpha_a, double alpha_b, double eta,
                           const OracleOptions& opts) {
    const double arm = std::sqrt(eta);
    const double worst_input = std::max(alpha_a, alpha_b) * std::max(alpha_a, alpha_b);
    const double pair_total = arm * (alpha_a * alpha_a + alpha_b * alpha_b);
    const int np = opts.cutoff > 0
                       ? opts.cutoff
                       : default_cutoff(std::max(worst_input, pair_total));
    const int ne_a = opts.cutoff > 0
                         ? opts.cutoff
                         : default_cutoff((1.0 - arm) * alpha_a * alpha_a);
    const int ne_b = opts.cutoff > 0
                         ? opts.cutoff
                         : default_cutoff((1.0 - arm) * alpha_b * alpha_b);

    HybridState state(SystemLayout{2, {np, np}}, opts.amplitude_cap);
    apply_hadamard(state, 0);
    apply_hadamard(state, 1);
    state.set_mode_coherent(0, alpha_a, opts.tail_tol);
    state.set_mode_coherent(1, alpha_b, opts.tail_tol);
    apply_controlled_pi(state, 0, 0);
    apply_controlled_pi(state, 1, 1);

    state.append_mode(np);  // mode 2: arm-A environment
    apply_loss(state, 0, arm, 2);
    state.resize_mode(2, std::min(np, ne_a));

    state.append_mode(np);  // mode 3: arm-B environment
    apply_loss(state, 1, arm, 3);
    state.resize_mode(3, std::min(np, ne_b));

    apply_beamsplitter(state, 0, 1, 0.5);

    OracleRun run;
    run.counts = herald_counts(state, 0, 1);
    run.outcomes = classify_pnr_parity(run.counts);
    run.norm_deficit = state.norm_deficit();
    run.pulse_cutoff = np;
    check_deficit(state, np);
    return run;
}

// Shared COW front end: pulse through memory A, loss eta, memory B.
// Leaves the state with modes [pulse(np), env(ne)].
HybridState cow_front_end(double alpha_pulse, double eta, int np, int ne,
                          const OracleOptions& opts) {
    HybridState state(SystemLayout{2, {np}}, opts.amplitude_cap);
    apply_hadamard(state, 0);
    apply_hadamard(state, 1);
    state.set_mode_coherent(0, alpha_pulse, opts.tail_tol);
    apply_controlled_pi(state, 0, 0);

    state.append_mode(np);  // mode 1: channel environment
    apply_loss(state, 0, eta, 1);
    state.resize_mode(1, std::min(np, ne));

    apply_controlled_pi(state, 1, 0);
    return state;
}

OracleRun run_cow_usd_pipeline(double alpha_pulse, double alpha_lo, double eta,
                               const OracleOptions& opts) {
    const double pair_total =
        eta * alpha_pulse * alpha_pulse + alpha_lo * alpha_lo;
    const int np = opts.cutoff > 0
                       ? opts.cutoff
                       : default_cutoff(std::max(alpha_pulse * alpha_pulse,
                                                 pair_total));
    const int ne = opts.cutoff > 0
                       ? opts.cutoff
                       : default_cutoff((1.0 - eta) * alpha_pulse * alpha_pulse);

    HybridState state = cow_front_end(alpha_pulse, eta, np, ne, opts);

    state.append_mode(np);  // mode 2: local oscillator
    state.set_mode_coherent(2, alpha_lo, opts.tail_tol);
    apply_beamsplitter(state, 0, 2, 0.5);

    OracleRun run;
    run.counts = herald_counts(state, 0, 2);
    run.outcomes = classify_onoff(run.counts);
    run.norm_deficit = state.norm_deficit();
    run.pulse_cutoff = np;
    check_deficit(state, np);
    return run;
}

}  // namespace

OracleRun run_ctw_oracle(double alpha, double eta, const OracleOptions& opts) {
    validate_protocol_inputs(alpha, eta);
    return run_ctw_pipeline(alpha, alpha, eta, opts);
}

OracleRun run_ctw_oracle_mismatch(double alpha, double eta, double epsilon,
                                  const OracleOptions& opts) {
    validate_protocol_inputs(alpha, eta);
    if (!(epsilon >= 0.0 && epsilon < 0.5)) {
        throw std::domain_error("oracle: epsilon must be in [0, 0.5)");
    }
    return run_ctw_pipeline(alpha * (1.0 + epsilon), alpha * (1.0 - epsilon),
                            eta, opts);
}

OracleRun run_cow_usd_oracle(double alpha, double eta,
                             const OracleOptions& opts) {
    validate_protocol_inputs(alpha, eta);
    return run_cow_usd_pipeline(alpha, alpha * std::sqrt(eta), eta, opts);
}

OracleRun run_cow_usd_oracle_mismatch(double alpha, double eta, double epsilon,
                                      const OracleOptions& opts) {
    validate_protocol_inputs(alpha, eta);
    if (!(epsilon >= 0.0 && epsilon < 0.5)) {
        throw std::domain_error("oracle: epsilon must be in [0, 0.5)");
    }
    return run_cow_usd_pipeline(alpha * (1.0 + epsilon),
                                alpha * std::sqrt(eta) * (1.0 - epsilon), eta,
                                opts);
}

DolinarOracleRun run_cow_dr_oracle(double alpha, double eta,
                                   const OracleOptions& opts) {
    validate_protocol_inputs(alpha, eta);
    const int np =
        opts.cutoff > 0 ? opts.cutoff : default_cutoff(alpha * alpha);
    const int ne = opts.cutoff > 0
                       ? opts.cutoff
                       : default_cutoff((1.0 - eta) * alpha * alpha);

    HybridState state = cow_front_end(alpha, eta, np, ne, opts);

    const double beta = alpha * std::sqrt(eta);
    Eigen::VectorXcd vp = coherent_state_vector(beta, np, opts.tail_tol);
    Eigen::VectorXcd vm = coherent_state_vector(-beta, np, opts.tail_tol);
    vp.normalize();
    vm.normalize();
    const HelstromPovm povm = helstrom_measurement(vp, vm);

    // rho_mem = sum_e W_e E^T W_e^dagger for POVM element E on the pulse.
    const std::ptrdiff_t sp = state.mode_stride(0);
    const std::ptrdiff_t se = state.mode_stride(1);
    const std::ptrdiff_t dp = state.mode_cutoff(0) + 1;
    const std::ptrdiff_t de = state.mode_cutoff(1) + 1;
    const std::ptrdiff_t s0 = state.qubit_stride(0);
    const std::ptrdiff_t s1 = state.qubit_stride(1);
    const auto& amp = state.amplitudes();

    const Eigen::MatrixXcd plus_t = povm.plus.transpose();
    const Eigen::MatrixXcd minus_t = povm.minus.transpose();
    Eigen::Matrix4cd rho_plus = Eigen::Matrix4cd::Zero();
    Eigen::Matrix4cd rho_minus = Eigen::Matrix4cd::Zero();
    Eigen::MatrixXcd w(4, dp);
    for (std::ptrdiff_t e = 0; e < de; ++e) {
        for (std::ptrdiff_t p = 0; p < dp; ++p) {
            const std::ptrdiff_t b = p * sp + e * se;
            w(0, p) = amp(b);
            w(1, p) = amp(b + s1);
            w(2, p) = amp(b + s0);
            w(3, p) = amp(b + s0 + s1);
        }
        rho_plus.noalias() += w * plus_t * w.adjoint();
        rho_minus.noalias() += w * minus_t * w.adjoint();
    }

    DolinarOracleRun run;
    run.error_probability = povm.error_probability;
    run.outcomes[0] =
        make_outcome(HeraldLabel::HelstromPlus, dephase_memory_parity(rho_plus));
    run.outcomes[1] = make_outcome(HeraldLabel::HelstromMinus,
                                   dephase_memory_parity(rho_minus));
    run.norm_deficit = state.norm_deficit();
    run.pulse_cutoff = np;
    check_deficit(state, np);
    return run;
}

namespace {

int tail_cutoff(double mu, const OracleOptions& opts) {
    // The two-temporal-mode systems are sized by Poisson-tail targeting; the
    // default_cutoff rule on seven modes would blow past the amplitude cap.
    const double tol = std::max(opts.tail_tol, 1e-10);
    return fock_cutoff_for_tail(mu, tol);
}

}  // namespace

OracleRun run_ctw_oracle_visibility(double alpha, double eta, double visibility,
                                    const OracleOptions& opts) {
    validate_protocol_inputs(alpha, eta);
    if (!(visibility > 0.0 && visibility <= 1.0)) {
        throw std::domain_error("oracle: visibility must be in (0, 1]");
    }
    const double arm = std::sqrt(eta);
    const double a2 = alpha * alpha;
    const double v = visibility;
    const double prep_tol = std::max(opts.tail_tol, 1e-10);

    // Pulse B splits into the matched mode g1 (amplitude alpha sqrt(V)) and
    // the orthogonal mode g2 (alpha sqrt(1-V)); pulse A lives in g1 only.
    const int n_g1 =
        opts.cutoff > 0
            ? opts.cutoff
            : tail_cutoff(std::max(a2, arm * a2 * (1.0 + v)), opts);
    const int n_g2 = std::max(1, tail_cutoff(a2 * (1.0 - v), opts));
    const int ne_a = tail_cutoff((1.0 - arm) * a2, opts);
    const int ne_b1 = tail_cutoff((1.0 - arm) * a2 * v, opts);
    const int ne_b2 = std::max(1, tail_cutoff((1.0 - arm) * a2 * (1.0 - v), opts));

    // modes: 0 = A g1, 1 = B g1, 2 = A g2 (vacuum), 3 = B g2
    HybridState state(SystemLayout{2, {n_g1, n_g1, n_g2, n_g2}},
                      opts.amplitude_cap);
    apply_hadamard(state, 0);
    apply_hadamard(state, 1);
    state.set_mode_coherent(0, alpha, prep_tol);
    state.set_mode_coherent(1, alpha * std::sqrt(v), prep_tol);
    state.set_mode_coherent(3, alpha * std::sqrt(1.0 - v), prep_tol);
    apply_controlled_pi(state, 0, 0);
    apply_controlled_pi(state, 1, 1);
    apply_controlled_pi(state, 1, 3);

    state.append_mode(n_g1);  // mode 4: arm-A environment
    apply_loss(state, 0, arm, 4);
    state.resize_mode(4, std::min(n_g1, ne_a));

    state.append_mode(n_g1);  // mode 5: arm-B g1 environment
    apply_loss(state, 1, arm, 5);
    state.resize_mode(5, std::min(n_g1, ne_b1));

    state.append_mode(n_g2);  // mode 6: arm-B g2 environment
    apply_loss(state, 3, arm, 6);
    state.resize_mode(6, std::min(n_g2, ne_b2));

    apply_beamsplitter(state, 0, 1, 0.5);
    apply_beamsplitter(state, 2, 3, 0.5);

    OracleRun run;
    run.counts = herald_counts(state, std::vector<int>{0, 2},
                               std::vector<int>{1, 3});
    run.outcomes = classify_pnr_parity(run.counts);
    run.norm_deficit = state.norm_deficit();
    run.pulse_cutoff = n_g1;
    check_deficit(state, n_g1);
    return run;
}

OracleRun run_cow_usd_oracle_visibility(double alpha, double eta,
                                        double visibility,
                                        const OracleOptions& opts) {
    validate_protocol_inputs(alpha, eta);
    if (!(visibility > 0.0 && visibility <= 1.0)) {
        throw std::domain_error("oracle: visibility must be in (0, 1]");
    }
    const double a2 = alpha * alpha;
    const double v = visibility;
    const double lo = alpha * std::sqrt(eta);
    const double prep_tol = std::max(opts.tail_tol, 1e-10);

    const int n_g1 =
        opts.cutoff > 0
            ? opts.cutoff
            : tail_cutoff(std::max(a2, eta * a2 * (1.0 + v)), opts);
    const int n_g2 = std::max(1, tail_cutoff(eta * a2 * (1.0 - v), opts));
    const int ne = tail_cutoff((1.0 - eta) * a2, opts);

    OracleOptions eff = opts;
    eff.cutoff = 0;
    eff.tail_tol = prep_tol;
    HybridState state = cow_front_end(alpha, eta, n_g1, ne, eff);

    state.append_mode(n_g1);  // mode 2: LO matched component
    state.set_mode_coherent(2, lo * std::sqrt(v), prep_tol);
    state.append_mode(n_g2);  // mode 3: LO mismatched component
    state.set_mode_coherent(3, lo * std::sqrt(1.0 - v), prep_tol);
    state.append_mode(n_g2);  // mode 4: signal-side g2 partner (vacuum)

    apply_beamsplitter(state, 0, 2, 0.5);
    apply_beamsplitter(state, 4, 3, 0.5);

    OracleRun run;
    run.counts = herald_counts(state, std::vector<int>{0, 4},
                               std::vector<int>{2, 3});
    run.outcomes = classify_onoff(run.counts);
    run.norm_deficit = state.norm_deficit();
    run.pulse_cutoff = n_g1;
    check_deficit(state, n_g1);
    return run;
}

}  // namespace cslink

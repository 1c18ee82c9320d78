#include "cslink/nonidealities.hpp"

#include <cmath>
#include <stdexcept>

#include "cslink/errors.hpp"

namespace cslink {

namespace {

MixedHerald make_mixed(HeraldLabel label, const Eigen::Matrix4cd& accum) {
    MixedHerald h;
    h.label = label;
    h.probability = accum.trace().real();
    if (h.probability > 0.0) {
        h.state = accum / h.probability;
        const BellDecomposition dec = bell_diagonal_decompose(h.state);
        h.bell_residual = dec.residual;
        h.hashing = hashing_bell_diagonal(dec.diagonal);
    }
    return h;
}

RatePoint aggregate_rate(double eta, double alpha,
                         const std::vector<MixedHerald>& heralds) {
    double p_success = 0.0;
    double rate = 0.0;
    for (const auto& h : heralds) {
        p_success += h.probability;
        rate += h.probability * std::max(0.0, h.hashing);
    }
    RatePoint rp;
    rp.eta = eta;
    rp.alpha = alpha;
    rp.p_success = checked_probability(p_success);
    rp.hashing = p_success > 0.0 ? rate / p_success : 0.0;
    rp.rate = rate;
    return rp;
}

// Composed midpoint-protocol model. Bright/dark port means carry the
// mismatch and visibility scalings; dark counts then mix the outcome
// classes. Success classes keep only correct-branch heralds (wrong-branch
// leakage through the dark port is post-selected away).
NoisyRateResult ctw_model(double alpha, double eta, double eps, double vis,
                          double pd) {
    const double arm = std::sqrt(eta);
    const double a2 = alpha * alpha;
    const double sv = std::sqrt(vis);
    const double e2 = eps * eps;

    const double mu_b = arm * a2 * ((1.0 + e2) + (1.0 - e2) * sv);
    const double mu_d = arm * a2 * ((1.0 + e2) - (1.0 - e2) * sv);
    const PnrParitySplit split = pnr_parity_probabilities(mu_b);
    const double dark_port = std::exp(-mu_d);

    const double p_even = 0.5 * split.p_even_pos * dark_port;  // per detector
    const double p_odd = 0.5 * split.p_odd * dark_port;
    const double p_fail = split.p_zero * dark_port;

    // Environment overlaps of the two arms (amplitudes alpha(1 +- eps)).
    const double ta = std::exp(-2.0 * (1.0 - arm) * a2 * (1.0 + eps) * (1.0 + eps));
    const double tb = std::exp(-2.0 * (1.0 - arm) * a2 * (1.0 - eps) * (1.0 - eps));
    const double t = ta * tb;
    const double hi = 0.5 * (1.0 + t);
    const double lo = 0.5 * (1.0 - t);

    const Eigen::Matrix4cd rho1 = bell_diagonal_state({hi, lo, 0.0, 0.0});
    const Eigen::Matrix4cd rho2 = bell_diagonal_state({lo, hi, 0.0, 0.0});
    const Eigen::Matrix4cd rho3 = bell_diagonal_state({0.0, 0.0, hi, lo});
    const Eigen::Matrix4cd rho4 = bell_diagonal_state({0.0, 0.0, lo, hi});
    const Eigen::Matrix4cd rho5 = dephased_plus_product(ta, tb);

    // A counted dark click flips the observed parity; one at the silent
    // detector discards the event. Clean events keep both detectors
    // dark-free, weight (1-pd)^2.
    const double w_clean = (1.0 - pd) * (1.0 - pd);
    const double w_flip = pd * (1.0 - pd);

    NoisyRateResult out;
    out.heralds.push_back(make_mixed(
        HeraldLabel::D1Even, w_clean * p_even * rho1 + w_flip * p_odd * rho2));
    out.heralds.push_back(make_mixed(
        HeraldLabel::D1Odd,
        w_clean * p_odd * rho2 + w_flip * (p_even * rho1 + p_fail * rho5)));
    out.heralds.push_back(make_mixed(
        HeraldLabel::D2Even, w_clean * p_even * rho3 + w_flip * p_odd * rho4));
    out.heralds.push_back(make_mixed(
        HeraldLabel::D2Odd,
        w_clean * p_odd * rho4 + w_flip * (p_even * rho3 + p_fail * rho5)));
    out.rate = aggregate_rate(eta, alpha, out.heralds);
    return out;
}

// Composed one-way-protocol model, on-off detection. A dark click at the
// already-clicked detector is unobservable, so the clean weight carries a
// single (1-pd) factor; see the no-click admixture weights.
NoisyRateResult cow_model(double alpha, double eta, double eps, double vis,
                          double pd) {
    const double a2 = alpha * alpha;
    const double sv = std::sqrt(vis);
    const double e2 = eps * eps;

    const double mu_b = eta * a2 * ((1.0 + e2) + (1.0 - e2) * sv);
    const double mu_d = eta * a2 * ((1.0 + e2) - (1.0 - e2) * sv);
    const double dark_port = std::exp(-mu_d);

    const double p_click = 0.5 * (1.0 - std::exp(-mu_b)) * dark_port;
    const double p_fail = std::exp(-mu_b) * dark_port;

    const double tp = cow_dephasing(alpha, eta);
    const double hi = 0.5 * (1.0 + tp);
    const double lo = 0.5 * (1.0 - tp);
    const Eigen::Matrix4cd sigma1 = bell_diagonal_state({hi, lo, 0.0, 0.0});
    const Eigen::Matrix4cd sigma2 = bell_diagonal_state({0.0, 0.0, hi, lo});
    const Eigen::Matrix4cd sigma3 = dephased_plus_product(tp, 1.0);

    const double w_clean = 1.0 - pd;
    const double w_flip = pd * (1.0 - pd);

    NoisyRateResult out;
    out.heralds.push_back(make_mixed(
        HeraldLabel::D1Click, w_clean * p_click * sigma1 + w_flip * p_fail * sigma3));
    out.heralds.push_back(make_mixed(
        HeraldLabel::D2Click, w_clean * p_click * sigma2 + w_flip * p_fail * sigma3));
    out.rate = aggregate_rate(eta, alpha, out.heralds);
    return out;
}

void validate_alpha_eta(double alpha, double eta) {
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw std::domain_error("alpha must be finite and >= 0");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("eta must be in (0, 1]");
    }
}

void validate_epsilon(double eps) {
    if (!(eps >= 0.0 && eps < 0.5)) {
        throw std::domain_error("epsilon must be in [0, 0.5)");
    }
}

void validate_p_dark(double pd) {
    if (!(pd >= 0.0 && pd <= 0.1)) {
        throw std::domain_error("p_dark must be in [0, 0.1]");
    }
}

void validate_visibility(double v) {
    if (!(v > 0.0 && v <= 1.0)) {
        throw std::domain_error("visibility must be in (0, 1]");
    }
}

}  // namespace

void NoiseConfig::validate() const {
    validate_epsilon(epsilon);
    validate_p_dark(p_dark);
    validate_visibility(visibility);
}

RatePoint ctw_rate_power_mismatch(double alpha, double eta, double epsilon) {
    validate_alpha_eta(alpha, eta);
    validate_epsilon(epsilon);
    if (epsilon == 0.0) return ctw_rate(alpha, eta);
    return ctw_model(alpha, eta, epsilon, 1.0, 0.0).rate;
}

RatePoint cow_usd_rate_power_mismatch(double alpha, double eta, double epsilon) {
    validate_alpha_eta(alpha, eta);
    validate_epsilon(epsilon);
    if (epsilon == 0.0) return cow_usd_rate(alpha, eta);
    return cow_model(alpha, eta, epsilon, 1.0, 0.0).rate;
}

NoisyRateResult ctw_rate_dark(double alpha, double eta, double p_dark) {
    validate_alpha_eta(alpha, eta);
    validate_p_dark(p_dark);
    NoisyRateResult res = ctw_model(alpha, eta, 0.0, 1.0, p_dark);
    if (p_dark == 0.0) res.rate = ctw_rate(alpha, eta);
    return res;
}

NoisyRateResult cow_usd_rate_dark(double alpha, double eta, double p_dark) {
    validate_alpha_eta(alpha, eta);
    validate_p_dark(p_dark);
    NoisyRateResult res = cow_model(alpha, eta, 0.0, 1.0, p_dark);
    if (p_dark == 0.0) res.rate = cow_usd_rate(alpha, eta);
    return res;
}

RatePoint ctw_rate_mode_mismatch(double alpha, double eta, double visibility) {
    validate_alpha_eta(alpha, eta);
    validate_visibility(visibility);
    if (visibility == 1.0) return ctw_rate(alpha, eta);
    return ctw_model(alpha, eta, 0.0, visibility, 0.0).rate;
}

RatePoint cow_usd_rate_mode_mismatch(double alpha, double eta,
                                     double visibility) {
    validate_alpha_eta(alpha, eta);
    validate_visibility(visibility);
    if (visibility == 1.0) return cow_usd_rate(alpha, eta);
    return cow_model(alpha, eta, 0.0, visibility, 0.0).rate;
}

Eigen::Matrix4cd herald_state_no_click(double alpha, double eta) {
    validate_alpha_eta(alpha, eta);
    const double td = std::exp(-2.0 * (1.0 - std::sqrt(eta)) * alpha * alpha);
    return dephased_plus_product(td, td);
}

Eigen::Matrix4cd cow_no_click_state(double alpha, double eta) {
    validate_alpha_eta(alpha, eta);
    return dephased_plus_product(cow_dephasing(alpha, eta), 1.0);
}

NoisyRateResult rate_composed_detail(Protocol protocol, double alpha,
                                     double eta, const NoiseConfig& noise) {
    validate_alpha_eta(alpha, eta);
    noise.validate();
    switch (protocol) {
        case Protocol::Ctw:
            if (noise.is_neutral()) {
                return {ctw_rate(alpha, eta), {}};
            }
            return ctw_model(alpha, eta, noise.epsilon, noise.visibility,
                             noise.p_dark);
        case Protocol::CowUsd:
            if (noise.is_neutral()) {
                return {cow_usd_rate(alpha, eta), {}};
            }
            return cow_model(alpha, eta, noise.epsilon, noise.visibility,
                             noise.p_dark);
        case Protocol::CowDr:
            if (!noise.is_neutral()) {
                throw unsupported_configuration(
                    "the Dolinar-receiver protocol has no noise model; "
                    "use neutral noise parameters");
            }
            return {cow_dr_rate(alpha, eta), {}};
    }
    throw std::logic_error("rate_composed: unknown protocol");
}

RatePoint rate_composed(Protocol protocol, double alpha, double eta,
                        const NoiseConfig& noise) {
    return rate_composed_detail(protocol, alpha, eta, noise).rate;
}

}  // namespace cslink

#include "cslink/protocols.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cslink {

namespace {

void validate_alpha_eta(double alpha, double eta) {
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw std::domain_error("alpha must be finite and >= 0");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("eta must be in (0, 1]");
    }
}

}  // namespace

double eta_from_loss_db(double loss_db) {
    if (!std::isfinite(loss_db) || loss_db < 0.0) {
        throw std::domain_error("loss_db must be finite and >= 0");
    }
    return std::pow(10.0, -loss_db / 10.0);
}

double loss_db_from_eta(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("eta must be in (0, 1]");
    }
    return -10.0 * std::log10(eta) + 0.0;  // +0.0 normalizes -0 at eta == 1
}

double LinkConfig::loss_db() const { return loss_db_from_eta(eta); }

double LinkConfig::arm_transmissivity() const {
    return topology == Topology::MidpointTwoArm ? std::sqrt(eta) : eta;
}

LinkConfig LinkConfig::from_loss_db(double loss_db, Topology topology) {
    return LinkConfig{eta_from_loss_db(loss_db), topology};
}

RatePoint make_rate_point(double eta, double alpha, double p_success,
                          double hashing) {
    RatePoint rp;
    rp.eta = eta;
    rp.alpha = alpha;
    rp.p_success = checked_probability(p_success);
    rp.hashing = hashing;
    rp.rate = rp.p_success * std::max(0.0, hashing);
    return rp;
}

double ctw_dephasing(double alpha, double eta) {
    return std::exp(-4.0 * (1.0 - std::sqrt(eta)) * alpha * alpha);
}

double cow_dephasing(double alpha, double eta) {
    return std::exp(-2.0 * (1.0 - eta) * alpha * alpha);
}

RatePoint ctw_rate(double alpha, double eta) {
    validate_alpha_eta(alpha, eta);
    const double p = 1.0 - std::exp(-2.0 * std::sqrt(eta) * alpha * alpha);
    const double t = ctw_dephasing(alpha, eta);
    return make_rate_point(eta, alpha, p, 1.0 - binary_entropy(0.5 * (1.0 + t)));
}

RatePoint cow_usd_rate(double alpha, double eta) {
    validate_alpha_eta(alpha, eta);
    const double p = 1.0 - std::exp(-2.0 * eta * alpha * alpha);
    const double t = cow_dephasing(alpha, eta);
    return make_rate_point(eta, alpha, p, 1.0 - binary_entropy(0.5 * (1.0 + t)));
}

RatePoint cow_dr_rate(double alpha, double eta) {
    validate_alpha_eta(alpha, eta);
    const DolinarErrorTable tbl = dolinar_error_table(alpha, eta);
    double hashing = 1.0;
    for (const auto& row : tbl.p) {
        for (double pjk : row) {
            if (pjk > 0.0) hashing += pjk * std::log2(pjk);
        }
    }
    return make_rate_point(eta, alpha, 1.0, hashing);
}

std::vector<HeraldOutcome> ctw_outcomes(double alpha, double eta) {
    validate_alpha_eta(alpha, eta);
    const double mu = 2.0 * std::sqrt(eta) * alpha * alpha;
    const PnrParitySplit split = pnr_parity_probabilities(mu);
    const double t = ctw_dephasing(alpha, eta);
    const double hi = 0.5 * (1.0 + t);
    const double lo = 0.5 * (1.0 - t);

    const Eigen::Matrix4cd phi_hi = bell_diagonal_state({hi, lo, 0.0, 0.0});
    const Eigen::Matrix4cd phi_lo = bell_diagonal_state({lo, hi, 0.0, 0.0});
    const Eigen::Matrix4cd psi_hi = bell_diagonal_state({0.0, 0.0, hi, lo});
    const Eigen::Matrix4cd psi_lo = bell_diagonal_state({0.0, 0.0, lo, hi});

    // Failure state: each memory independently dephased around |+>.
    const double td = std::exp(-2.0 * (1.0 - std::sqrt(eta)) * alpha * alpha);
    const Eigen::Matrix4cd none = dephased_plus_product(td, td);

    return {{HeraldLabel::D1Even, 0.5 * split.p_even_pos, phi_hi},
            {HeraldLabel::D1Odd, 0.5 * split.p_odd, phi_lo},
            {HeraldLabel::D2Even, 0.5 * split.p_even_pos, psi_hi},
            {HeraldLabel::D2Odd, 0.5 * split.p_odd, psi_lo},
            {HeraldLabel::NoClick, split.p_zero, none}};
}

double dolinar_error(double alpha_eff) {
    if (!std::isfinite(alpha_eff) || alpha_eff < 0.0) {
        throw std::domain_error("dolinar_error: amplitude must be >= 0");
    }
    const double overlap_sq = std::exp(-4.0 * alpha_eff * alpha_eff);
    return 0.5 * (1.0 - std::sqrt(1.0 - overlap_sq));
}

DolinarErrorTable dolinar_error_table(double alpha, double eta) {
    validate_alpha_eta(alpha, eta);
    DolinarErrorTable tbl;
    tbl.p_e = dolinar_error(alpha * std::sqrt(eta));
    const double tp = cow_dephasing(alpha, eta);
    tbl.p_phase = 0.5 * (1.0 - tp);
    const double r = 1.0 - 2.0 * tbl.p_e;  // sqrt(1 - e^{-4 eta |a|^2})
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            tbl.p[j][k] = 0.5 * (1.0 + (j == 0 ? tp : -tp)) * 0.5 *
                          (1.0 + (k == 0 ? r : -r));
        }
    }
    return tbl;
}

double repeaterless_bound_midpoint(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("repeaterless bound: eta must be in (0, 1]");
    }
    if (eta == 1.0) return std::numeric_limits<double>::infinity();
    return -std::log2(1.0 - std::sqrt(eta));
}

double repeaterless_bound_direct(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("repeaterless bound: eta must be in (0, 1]");
    }
    if (eta == 1.0) return std::numeric_limits<double>::infinity();
    return -std::log2(1.0 - eta);
}

BaselineCurves baseline_curves(double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("baseline_curves: eta must be in (0, 1]");
    }
    BaselineCurves b;
    b.single_rail_ref = std::min(0.11 * std::sqrt(eta), 0.5);
    b.dual_rail_ref = std::min(0.5 * eta, 0.5);
    b.cap = 0.5;
    return b;
}

}  // namespace cslink

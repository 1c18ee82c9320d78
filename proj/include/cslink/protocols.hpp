#pragma once

#include <vector>

#include "cslink/bell.hpp"
#include "cslink/core_math.hpp"

namespace cslink {

enum class Protocol { Ctw, CowUsd, CowDr };

enum class Topology { MidpointTwoArm, OneWay };

// End-to-end transmissivity plus link topology. A midpoint link splits the
// loss over two arms of transmissivity sqrt(eta) each.
struct LinkConfig {
    double eta = 1.0;
    Topology topology = Topology::MidpointTwoArm;

    double loss_db() const;
    double arm_transmissivity() const;
    static LinkConfig from_loss_db(double loss_db, Topology topology);
};

double eta_from_loss_db(double loss_db);
double loss_db_from_eta(double eta);

// One evaluated operating point. `hashing` is the raw per-success hashing
// bound (may be negative); rate = p_success * max(0, hashing).
struct RatePoint {
    double eta = 0.0;
    double alpha = 0.0;
    double p_success = 0.0;
    double hashing = 0.0;
    double rate = 0.0;
};
RatePoint make_rate_point(double eta, double alpha, double p_success,
                          double hashing);

// Channel-loss dephasing of the heralded states: T for the midpoint
// protocol, T' for the one-way ones.
double ctw_dephasing(double alpha, double eta);
double cow_dephasing(double alpha, double eta);

RatePoint ctw_rate(double alpha, double eta);
RatePoint cow_usd_rate(double alpha, double eta);
RatePoint cow_dr_rate(double alpha, double eta);

// The five analytic outcome classes of the midpoint protocol, with
// per-class probabilities from the exact Poisson parity split.
std::vector<HeraldOutcome> ctw_outcomes(double alpha, double eta);

// Minimum-error probability for discriminating |+a> from |-a| at the
// receiver, a being the post-loss amplitude.
double dolinar_error(double alpha_eff);

// Bit-flip/phase-flip error table of the binary-receiver protocol.
struct DolinarErrorTable {
    double p_e = 0.0;      // bit flip: discrimination error
    double p_phase = 0.0;  // phase flip: (1 - e^{-2(1-eta)|a|^2})/2
    double p[2][2] = {{0.0, 0.0}, {0.0, 0.0}};  // joint P_{j,k}
};
DolinarErrorTable dolinar_error_table(double alpha, double eta);

// Repeaterless capacity bounds, -log2(1 - sqrt(eta)) for midpoint links and
// -log2(1 - eta) one-way. eta == 1 returns +infinity.
double repeaterless_bound_midpoint(double eta);
double repeaterless_bound_direct(double eta);

// Single-photon reference curves for plots and crossover checks. These are
// reference asymptotes, not full protocol models.
struct BaselineCurves {
    double single_rail_ref = 0.0;  // min(0.11 sqrt(eta), 0.5)
    double dual_rail_ref = 0.0;    // min(eta / 2, 0.5)
    double cap = 0.5;
};
BaselineCurves baseline_curves(double eta);

}  // namespace cslink

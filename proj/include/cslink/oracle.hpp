#pragma once

#include <array>
#include <vector>

#include "cslink/bell.hpp"
#include "cslink/fock.hpp"

namespace cslink {

struct OracleOptions {
    // 0 selects the automatic per-mode rule (the default_cutoff rule for the
    // single-temporal-mode pipelines, Poisson-tail targeting for the
    // two-temporal-mode ones). A positive value pins the pulse-mode cutoff.
    int cutoff = 0;
    double tail_tol = 1e-12;
    std::size_t amplitude_cap = HybridState::kDefaultAmplitudeCap;
};

struct OracleRun {
    std::vector<HeraldOutcome> outcomes;  // complete set, probabilities sum to 1
    CountDistribution counts;             // count-resolved herald table
    double norm_deficit = 0.0;
    int pulse_cutoff = 0;

    const HeraldOutcome& outcome(HeraldLabel label) const;
};

// Grouping of raw detector counts into outcome classes. States are the
// normalized memory states conditioned on the class; zero-probability
// classes carry a zero state.
std::vector<HeraldOutcome> classify_pnr_parity(const CountDistribution& counts);
std::vector<HeraldOutcome> classify_onoff(const CountDistribution& counts);

// Probability that a single-detector event also carries the memory parity it
// is supposed to herald (even parity at detector 1, odd at detector 2).
// Under power or mode mismatch the complement is wrong-branch contamination.
double clean_herald_probability(const CountDistribution& counts);

// Midpoint interference of two memory-conditioned pulses, per-arm
// transmissivity sqrt(eta), dual PNR detection. Ideal protocol has
// alpha_a == alpha_b; a power mismatch scales them apart.
OracleRun run_ctw_oracle(double alpha, double eta, const OracleOptions& = {});
OracleRun run_ctw_oracle_mismatch(double alpha, double eta, double epsilon,
                                  const OracleOptions& = {});
OracleRun run_ctw_oracle_visibility(double alpha, double eta, double visibility,
                                    const OracleOptions& = {});

// One-way pulse visiting both memories, loss eta, interference with a local
// oscillator of amplitude alpha sqrt(eta), on-off detection.
OracleRun run_cow_usd_oracle(double alpha, double eta, const OracleOptions& = {});
OracleRun run_cow_usd_oracle_mismatch(double alpha, double eta, double epsilon,
                                      const OracleOptions& = {});
OracleRun run_cow_usd_oracle_visibility(double alpha, double eta,
                                        double visibility,
                                        const OracleOptions& = {});

// One-way pulse as above, terminated by the minimum-error binary
// discrimination of the +-alpha sqrt(eta) branches. The heralded states are
// the decision-conditioned mixtures: the binary decision carries no memory
// phase information, so memory parity coherences are dephased away before
// reporting.
struct DolinarOracleRun {
    double error_probability = 0.0;
    std::array<HeraldOutcome, 2> outcomes;  // plus, minus
    double norm_deficit = 0.0;
    int pulse_cutoff = 0;
};
DolinarOracleRun run_cow_dr_oracle(double alpha, double eta,
                                   const OracleOptions& = {});

}  // namespace cslink

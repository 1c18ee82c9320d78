#pragma once

#include <vector>

#include "cslink/bell.hpp"
#include "cslink/protocols.hpp"

namespace cslink {

// Non-ideality parameters: fractional amplitude mismatch epsilon between the
// interfering pulses, per-detector dark-click probability, and the
// spectro-temporal mode-match visibility of the interference.
struct NoiseConfig {
    double epsilon = 0.0;
    double p_dark = 0.0;
    double visibility = 1.0;

    bool is_neutral() const {
        return epsilon == 0.0 && p_dark == 0.0 && visibility == 1.0;
    }
    void validate() const;
};

// A heralded outcome whose state is generally a mixture of Bell-diagonal
// components and the no-click state. `hashing` is computed from the
// Bell-basis diagonal; `bell_residual` reports the off-diagonal remainder.
struct MixedHerald {
    HeraldLabel label;
    double probability = 0.0;
    Eigen::Matrix4cd state = Eigen::Matrix4cd::Zero();
    double bell_residual = 0.0;
    double hashing = 0.0;
};

struct NoisyRateResult {
    RatePoint rate;
    std::vector<MixedHerald> heralds;
};

// Power mismatch: pulses alpha(1+eps) and alpha(1-eps). The bright-port
// amplitude is unchanged; success is reduced by the dark-port vacuum factor
// and the heralded dephasing acquires the (1+eps^2) exponent of the two
// unequal environment amplitudes.
RatePoint ctw_rate_power_mismatch(double alpha, double eta, double epsilon);
RatePoint cow_usd_rate_power_mismatch(double alpha, double eta, double epsilon);

// Detector dark counts: Bernoulli(p_dark) extra count per detector per use.
// Heralded states become weighted mixtures with the parity-flipped and
// no-click components; simultaneous-click events count as failures.
NoisyRateResult ctw_rate_dark(double alpha, double eta, double p_dark);
NoisyRateResult cow_usd_rate_dark(double alpha, double eta, double p_dark);

// Mode mismatch: the interfering pulses overlap with visibility V. The
// bright/dark port intensities are scaled by (1 +- sqrt(V)); post-selection
// on a silent dark port leaves the heralded states in their ideal form.
RatePoint ctw_rate_mode_mismatch(double alpha, double eta, double visibility);
RatePoint cow_usd_rate_mode_mismatch(double alpha, double eta,
                                     double visibility);

// Normalized two-memory state conditioned on zero clicks.
Eigen::Matrix4cd herald_state_no_click(double alpha, double eta);  // midpoint
Eigen::Matrix4cd cow_no_click_state(double alpha, double eta);     // one-way

// All three effects together: mismatch-scaled amplitudes and
// visibility-scaled port intensities first, then dark-count mixing of the
// outcome distribution. Neutral parameters reproduce the ideal rates
// exactly. The Dolinar-receiver protocol supports no noise model.
RatePoint rate_composed(Protocol protocol, double alpha, double eta,
                        const NoiseConfig& noise);
NoisyRateResult rate_composed_detail(Protocol protocol, double alpha,
                                     double eta, const NoiseConfig& noise);

}  // namespace cslink

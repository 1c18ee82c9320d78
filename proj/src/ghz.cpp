#include "cslink/ghz.hpp"

#include <cmath>
#include <stdexcept>

namespace cslink {

double ghz_expected_rounds(const GhzSpec& spec) {
    if (spec.n_memories < 2) {
        throw std::domain_error("ghz: n_memories must be >= 2");
    }
    const double p = spec.per_link_success;
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::domain_error(
            "ghz: per-link success must be in (0, 1]; the expected round "
            "count diverges at p = 0");
    }
    const int links = spec.n_memories - 1;
    if (spec.policy == GhzPolicy::RetryLink) return links / p;
    if (p == 1.0) return static_cast<double>(links);
    return (std::pow(p, -links) - 1.0) / (1.0 - p);
}

GhzComparison ghz_throughput_compare(int n_memories, double eta,
                                     const NoiseConfig& noise) {
    if (n_memories < 2) {
        throw std::domain_error("ghz: n_memories must be >= 2");
    }
    const OptimizeResult opt = optimize_alpha(Protocol::Ctw, eta, noise);

    GhzComparison cmp;
    cmp.n_memories = n_memories;
    cmp.eta = eta;
    cmp.alpha_star = opt.alpha_star;
    cmp.p_coherent = opt.rate.p_success;
    cmp.rounds_coherent = ghz_expected_rounds(
        {n_memories, cmp.p_coherent, GhzPolicy::RetryLink});
    cmp.p_baseline = 0.5;
    cmp.rounds_baseline = ghz_expected_rounds(
        {n_memories, cmp.p_baseline, GhzPolicy::RestartChain});
    cmp.ratio = cmp.rounds_baseline / cmp.rounds_coherent;
    return cmp;
}

}  // namespace cslink

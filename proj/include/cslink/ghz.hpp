#pragma once

#include "cslink/nonidealities.hpp"
#include "cslink/sweep.hpp"

namespace cslink {

// Chain-building policies for entangling N memories into a GHZ state.
// retry-link: a failed attempt leaves the partial chain intact and only the
// current link is retried. restart-chain: any failure restarts from scratch.
enum class GhzPolicy { RetryLink, RestartChain };

struct GhzSpec {
    int n_memories = 2;            // >= 2
    double per_link_success = 1.0; // in (0, 1]
    GhzPolicy policy = GhzPolicy::RetryLink;
};

// Expected number of link-level attempts to finish the chain.
// retry-link: (N-1)/p. restart-chain: sum_{k=1}^{N-1} p^{-k}.
double ghz_expected_rounds(const GhzSpec& spec);

// Coherent chain (retry-link, per-link success from the rate-optimized
// midpoint protocol) versus the 0.5-capped single-photon baseline built
// with restart-chain semantics.
struct GhzComparison {
    int n_memories = 0;
    double eta = 0.0;
    double alpha_star = 0.0;
    double p_coherent = 0.0;
    double rounds_coherent = 0.0;
    double p_baseline = 0.5;
    double rounds_baseline = 0.0;
    double ratio = 0.0;  // baseline / coherent
};
GhzComparison ghz_throughput_compare(int n_memories, double eta,
                                     const NoiseConfig& noise = {});

}  // namespace cslink

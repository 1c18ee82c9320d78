#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cslink/nonidealities.hpp"
#include "cslink/protocols.hpp"

namespace cslink {

// Anything with a rate-vs-loss curve: the three coherent protocols, the
// single-photon reference asymptotes, and the flat 0.5 cap.
enum class RateCurve { Ctw, CowUsd, CowDr, SingleRailRef, DualRailRef, CapHalf };

std::string curve_name(RateCurve curve);
std::optional<RateCurve> parse_curve(const std::string& name);
std::optional<Protocol> curve_protocol(RateCurve curve);

struct AlphaBounds {
    double lo = 1e-3;
    double hi = 5.0;
};

struct OptimizeResult {
    double alpha_star = 0.0;
    RatePoint rate;
    bool boundary = false;    // maximum sits at the search-box edge
    bool multimodal = false;  // coarse scan saw more than one local maximum
};

// Coarse log-spaced scan (scan_points, default 200) to bracket the maximum,
// then golden-section refinement. The returned rate is never below the best
// scan value.
OptimizeResult optimize_alpha(Protocol protocol, double eta,
                              const NoiseConfig& noise = {},
                              const AlphaBounds& bounds = {},
                              double rel_tol = 1e-6, int scan_points = 200);

// Rate of a curve at a loss point, with alpha optimized for protocol curves.
double optimized_rate(RateCurve curve, double eta, const NoiseConfig& noise,
                      const AlphaBounds& bounds = {}, int scan_points = 200);

enum class SweepSpacing { LinearDb, LogEta };

struct SweepSpec {
    std::vector<RateCurve> curves = {RateCurve::Ctw, RateCurve::CowUsd,
                                     RateCurve::CowDr};
    double loss_db_min = 0.01;
    double loss_db_max = 40.0;
    int points = 50;
    SweepSpacing spacing = SweepSpacing::LinearDb;
    NoiseConfig noise;
    AlphaBounds alpha_bounds;
    bool optimize = true;
    double fixed_alpha = 0.5;  // used when optimize == false

    void validate() const;
    std::vector<double> loss_grid_db() const;
};

struct SweepRow {
    RateCurve curve;
    double loss_db = 0.0;
    double eta = 0.0;
    double alpha = 0.0;
    double p_success = 0.0;
    double hashing = 0.0;
    double rate = 0.0;
    double bound_midpoint = 0.0;
    double bound_direct = 0.0;
    std::string flags;
};

// One row per (curve, loss point), evaluated concurrently, returned sorted
// by curve then loss. Parallelism degree comes from the CSLINK_THREADS
// environment variable (default: hardware concurrency).
std::vector<SweepRow> sweep_loss(const SweepSpec& spec);

// Bisection (to tol_db) for the loss where two optimized-rate curves cross.
// No sign change over the bracket is a no-crossover result, not an error.
struct CrossoverResult {
    bool found = false;
    double loss_db = 0.0;
};
CrossoverResult crossover_loss(RateCurve a, RateCurve b,
                               const NoiseConfig& noise, double bracket_lo_db,
                               double bracket_hi_db,
                               const AlphaBounds& bounds = {},
                               double tol_db = 0.01, int scan_points = 200);

}  // namespace cslink

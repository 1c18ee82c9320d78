#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cslink/errors.hpp"
#include "cslink/ghz.hpp"
#include "cslink/sweep.hpp"

using namespace cslink;

namespace {

// Monte-Carlo oracle for the restart-chain policy: attempts until
// (n_memories - 1) consecutive successes.
double restart_chain_monte_carlo(int n_memories, double p, int trials,
                                 unsigned seed) {
    std::mt19937 rng(seed);
    std::bernoulli_distribution link(p);
    const int needed = n_memories - 1;
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
        int streak = 0;
        long attempts = 0;
        while (streak < needed) {
            ++attempts;
            streak = link(rng) ? streak + 1 : 0;
        }
        total += static_cast<double>(attempts);
    }
    return total / trials;
}

}  // namespace

TEST_CASE("optimize_alpha flags the boundary optimum at eta = 1") {
    const OptimizeResult opt = optimize_alpha(Protocol::Ctw, 1.0);
    CHECK(opt.boundary);
    CHECK(opt.rate.rate > 0.999999);
    CHECK(opt.alpha_star == doctest::Approx(5.0).epsilon(1e-3));
}

TEST_CASE("optimize_alpha in the deep-loss limit") {
    const OptimizeResult opt = optimize_alpha(Protocol::Ctw, 1e-6);
    CHECK(!opt.boundary);
    CHECK(opt.alpha_star < 0.5);
    CHECK(opt.rate.rate < 1e-3);
    CHECK(opt.rate.rate > 0.0);
}

TEST_CASE("optimize_alpha regression at eta = 0.5 against a dense grid") {
    const OptimizeResult opt = optimize_alpha(Protocol::Ctw, 0.5);
    // frozen after a 10^4-point brute-force confirmation
    CHECK(opt.alpha_star == doctest::Approx(0.55158).epsilon(2e-3));
    CHECK(opt.rate.rate == doctest::Approx(0.136495510269).epsilon(1e-8));

    double grid_best = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double a = 1e-3 * std::exp(i * std::log(5.0 / 1e-3) / 9999);
        grid_best = std::max(grid_best, ctw_rate(a, 0.5).rate);
    }
    CHECK(opt.rate.rate >= grid_best - 1e-12);
}

TEST_CASE("optimize_alpha never loses to its own coarse scan") {
    for (double eta : {0.1, 0.5, 0.9}) {
        for (Protocol p : {Protocol::Ctw, Protocol::CowUsd, Protocol::CowDr}) {
            const OptimizeResult opt = optimize_alpha(p, eta);
            double scan_best = 0.0;
            for (int i = 0; i < 200; ++i) {
                const double a = 1e-3 * std::exp(i * std::log(5.0 / 1e-3) / 199);
                scan_best =
                    std::max(scan_best, rate_composed(p, a, eta, {}).rate);
            }
            CHECK(opt.rate.rate >= scan_best - 1e-12);
        }
    }
}

TEST_CASE("optimize_alpha is stable under a denser but equivalent tolerance") {
    for (double eta : {0.3, 0.8}) {
        const double r1 = optimize_alpha(Protocol::Ctw, eta, {}, {}, 1e-6).rate.rate;
        const double r2 = optimize_alpha(Protocol::Ctw, eta, {}, {}, 1e-9).rate.rate;
        CHECK(std::abs(r1 - r2) < 1e-9);
    }
}

TEST_CASE("single-point sweep equals the direct rate call") {
    SweepSpec spec;
    spec.curves = {RateCurve::Ctw};
    spec.points = 1;
    spec.loss_db_min = 3.0;
    spec.optimize = false;
    spec.fixed_alpha = 0.7;
    const auto rows = sweep_loss(spec);
    REQUIRE(rows.size() == 1);
    const RatePoint direct = ctw_rate(0.7, eta_from_loss_db(3.0));
    CHECK(rows[0].rate == direct.rate);
    CHECK(rows[0].p_success == direct.p_success);
}

TEST_CASE("sweep rates fall monotonically with loss") {
    SweepSpec spec;
    spec.loss_db_min = 0.05;
    spec.loss_db_max = 20.0;
    spec.points = 15;
    const auto rows = sweep_loss(spec);
    CHECK(rows.size() == 45);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].curve != rows[i - 1].curve) continue;
        CHECK(rows[i].loss_db > rows[i - 1].loss_db);  // deterministic order
        CHECK(rows[i].rate <= rows[i - 1].rate + 1e-9);
    }
}

TEST_CASE("sweep reference rows carry the asymptote flag") {
    SweepSpec spec;
    spec.curves = {RateCurve::Ctw, RateCurve::SingleRailRef, RateCurve::DualRailRef};
    spec.points = 2;
    spec.loss_db_min = 1.0;
    spec.loss_db_max = 10.0;
    const auto rows = sweep_loss(spec);
    CHECK(rows.size() == 6);
    int refs = 0;
    for (const auto& r : rows) {
        if (r.flags == "reference-asymptote") {
            ++refs;
            CHECK(r.alpha == 0.0);
            const BaselineCurves b = baseline_curves(r.eta);
            CHECK((r.rate == b.single_rail_ref || r.rate == b.dual_rail_ref));
        }
    }
    CHECK(refs == 4);
}

TEST_CASE("sweep spacing modes produce the same grid") {
    SweepSpec lin, lg;
    lin.points = lg.points = 7;
    lin.loss_db_min = lg.loss_db_min = 0.5;
    lin.loss_db_max = lg.loss_db_max = 12.0;
    lg.spacing = SweepSpacing::LogEta;
    const auto a = lin.loss_grid_db();
    const auto b = lg.loss_grid_db();
    for (int i = 0; i < 7; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("sweep propagates the unsupported-configuration error") {
    SweepSpec spec;
    spec.curves = {RateCurve::CowDr};
    spec.noise.p_dark = 0.01;
    spec.points = 2;
    CHECK_THROWS_AS(sweep_loss(spec), unsupported_configuration);
}

TEST_CASE("no crossover of a protocol with itself") {
    const CrossoverResult c =
        crossover_loss(RateCurve::Ctw, RateCurve::Ctw, {}, 0.1, 5.0);
    CHECK(!c.found);
}

TEST_CASE("ctw crosses the single-photon cap in the sub-dB regime") {
    const CrossoverResult c =
        crossover_loss(RateCurve::Ctw, RateCurve::CapHalf, {}, 0.05, 3.0);
    REQUIRE(c.found);
    CHECK(c.loss_db > 0.2);
    CHECK(c.loss_db < 1.0);

    // stable against a denser bisection and a doubled coarse-scan density
    const CrossoverResult fine = crossover_loss(RateCurve::Ctw, RateCurve::CapHalf,
                                                {}, 0.05, 3.0, {}, 0.005);
    CHECK(std::abs(c.loss_db - fine.loss_db) <= 0.01);
    const CrossoverResult dense = crossover_loss(RateCurve::Ctw, RateCurve::CapHalf,
                                                 {}, 0.05, 3.0, {}, 0.01, 400);
    CHECK(std::abs(c.loss_db - dense.loss_db) <= 0.01);
}

TEST_CASE("ctw sits below the single-rail reference at high loss") {
    const double eta = eta_from_loss_db(35.0);
    CHECK(optimized_rate(RateCurve::Ctw, eta, {}) <
          optimized_rate(RateCurve::SingleRailRef, eta, {}));
}

TEST_CASE("optimized rate is monotone in eta") {
    for (Protocol p : {Protocol::Ctw, Protocol::CowUsd, Protocol::CowDr}) {
        double prev = 0.0;
        for (double eta : {0.05, 0.2, 0.4, 0.6, 0.8, 0.95}) {
            const double r = optimize_alpha(p, eta).rate.rate;
            CHECK(r >= prev - 1e-9);
            prev = r;
        }
    }
}

TEST_CASE("ghz expected rounds: formulas and edge cases") {
    CHECK(ghz_expected_rounds({2, 1.0, GhzPolicy::RetryLink}) == 1.0);
    CHECK(ghz_expected_rounds({2, 1.0, GhzPolicy::RestartChain}) == 1.0);
    CHECK(ghz_expected_rounds({5, 0.9, GhzPolicy::RetryLink}) ==
          doctest::Approx(4.0 / 0.9).epsilon(1e-14));
    CHECK(ghz_expected_rounds({4, 0.5, GhzPolicy::RestartChain}) ==
          doctest::Approx(14.0).epsilon(1e-14));
    CHECK_THROWS_AS(ghz_expected_rounds({4, 0.0, GhzPolicy::RetryLink}),
                    std::domain_error);
    CHECK_THROWS_AS(ghz_expected_rounds({1, 0.5, GhzPolicy::RetryLink}),
                    std::domain_error);
}

TEST_CASE("ghz retry-link cost is linear in the chain length") {
    const double p = 0.7;
    for (int n = 2; n <= 12; ++n) {
        CHECK(ghz_expected_rounds({n, p, GhzPolicy::RetryLink}) ==
              doctest::Approx((n - 1) / p).epsilon(1e-14));
    }
}

TEST_CASE("ghz restart-chain matches a Monte-Carlo simulation within 1%") {
    const int trials = 1000000;
    unsigned seed = 12345;
    for (double p : {0.3, 0.5, 0.8}) {
        const double expected = ghz_expected_rounds({4, p, GhzPolicy::RestartChain});
        const double mc = restart_chain_monte_carlo(4, p, trials, seed++);
        CHECK(std::abs(mc - expected) / expected < 0.01);
    }
}

TEST_CASE("ghz restart-chain cost doubles per added memory at p = 1/2") {
    for (int n = 3; n <= 10; ++n) {
        const double e = ghz_expected_rounds({n, 0.5, GhzPolicy::RestartChain});
        CHECK(e == doctest::Approx(std::pow(2.0, n) - 2.0).epsilon(1e-12));
        CHECK(e >= std::pow(2.0, n - 1));
    }
}

TEST_CASE("ghz throughput comparison") {
    const GhzComparison lossless = ghz_throughput_compare(7, 1.0);
    CHECK(lossless.rounds_coherent == 6.0);  // exactly N-1 without loss

    const GhzComparison c10 = ghz_throughput_compare(10, 0.98);
    CHECK(c10.rounds_baseline == doctest::Approx(1022.0).epsilon(1e-12));

    double prev_ratio = 0.0;
    for (int n = 3; n <= 10; ++n) {
        const GhzComparison c = ghz_throughput_compare(n, 0.98);
        CHECK(c.ratio > 1.5 * prev_ratio);  // exponential growth in n
        prev_ratio = c.ratio;
    }
}

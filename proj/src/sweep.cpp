#include "cslink/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <stdexcept>
#include <thread>

namespace cslink {

namespace {

int thread_count() {
    if (const char* env = std::getenv("CSLINK_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Strided parallel map; exceptions from workers are rethrown to the caller.
void parallel_for(int n_tasks, const std::function<void(int)>& task) {
    const int n_threads = std::min(thread_count(), std::max(1, n_tasks));
    if (n_threads == 1) {
        for (int i = 0; i < n_tasks; ++i) task(i);
        return;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(n_threads);
    for (int w = 0; w < n_threads; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (int i = w; i < n_tasks; i += n_threads) task(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// Golden-section maximization on [a, b]; returns the best evaluated point.
std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                     double a, double b, double rel_tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c);
    double fd = f(d);
    double best_x = fc >= fd ? c : d;
    double best_f = std::max(fc, fd);
    for (int it = 0; it < 200 && (b - a) > rel_tol * std::max(1e-12, b); ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
        if (fc > best_f) best_f = fc, best_x = c;
        if (fd > best_f) best_f = fd, best_x = d;
    }
    return {best_x, best_f};
}

}  // namespace

std::string curve_name(RateCurve curve) {
    switch (curve) {
        case RateCurve::Ctw: return "ctw";
        case RateCurve::CowUsd: return "cow-usd";
        case RateCurve::CowDr: return "cow-dr";
        case RateCurve::SingleRailRef: return "single-rail-ref";
        case RateCurve::DualRailRef: return "dual-rail-ref";
        case RateCurve::CapHalf: return "cap";
    }
    return "unknown";
}

std::optional<RateCurve> parse_curve(const std::string& name) {
    if (name == "ctw") return RateCurve::Ctw;
    if (name == "cow-usd") return RateCurve::CowUsd;
    if (name == "cow-dr") return RateCurve::CowDr;
    if (name == "single-rail-ref") return RateCurve::SingleRailRef;
    if (name == "dual-rail-ref") return RateCurve::DualRailRef;
    if (name == "cap") return RateCurve::CapHalf;
    return std::nullopt;
}

std::optional<Protocol> curve_protocol(RateCurve curve) {
    switch (curve) {
        case RateCurve::Ctw: return Protocol::Ctw;
        case RateCurve::CowUsd: return Protocol::CowUsd;
        case RateCurve::CowDr: return Protocol::CowDr;
        default: return std::nullopt;
    }
}

OptimizeResult optimize_alpha(Protocol protocol, double eta,
                              const NoiseConfig& noise,
                              const AlphaBounds& bounds, double rel_tol,
                              int scan_points) {
    if (!(bounds.lo > 0.0 && bounds.lo < bounds.hi)) {
        throw std::domain_error("optimize_alpha: need 0 < alpha_min < alpha_max");
    }
    if (!(rel_tol > 0.0) || scan_points < 8) {
        throw std::domain_error("optimize_alpha: bad tolerance or scan density");
    }
    const auto f = [&](double alpha) {
        return rate_composed(protocol, alpha, eta, noise).rate;
    };
    f(bounds.lo);  // surfaces domain errors before the scan

    const int kScanPoints = scan_points;
    const double log_step = std::log(bounds.hi / bounds.lo) / (kScanPoints - 1);
    std::vector<double> xs(kScanPoints), fs(kScanPoints);
    for (int i = 0; i < kScanPoints; ++i) {
        xs[i] = bounds.lo * std::exp(i * log_step);
        fs[i] = f(xs[i]);
    }
    xs.back() = bounds.hi;

    const auto is_local_max = [&](int i) {
        const bool left_ok = i == 0 || fs[i] > fs[i - 1];
        const bool right_ok = i == kScanPoints - 1 || fs[i] > fs[i + 1];
        return left_ok && right_ok;
    };
    std::vector<int> candidates;
    for (int i = 0; i < kScanPoints; ++i) {
        if (is_local_max(i)) candidates.push_back(i);
    }
    // Ties resolve toward the larger amplitude so that a plateau hugging the
    // box edge (rate saturating at 1 ebit/ch without loss) reports the edge.
    int argmax = 0;
    for (int i = 1; i < kScanPoints; ++i) {
        if (fs[i] >= fs[argmax]) argmax = i;
    }
    if (std::find(candidates.begin(), candidates.end(), argmax) ==
        candidates.end()) {
        candidates.push_back(argmax);
    }

    double best_x = xs[argmax];
    double best_f = fs[argmax];
    for (int i : candidates) {
        const double lo = xs[std::max(0, i - 1)];
        const double hi = xs[std::min(kScanPoints - 1, i + 1)];
        const auto [x, fx] = golden_max(f, lo, hi, rel_tol);
        if (fx > best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    if (argmax == kScanPoints - 1 && fs[argmax] >= best_f) {
        best_f = fs[argmax];
        best_x = bounds.hi;
    }

    OptimizeResult result;
    result.alpha_star = best_x;
    result.rate = rate_composed_detail(protocol, best_x, eta, noise).rate;
    result.boundary =
        argmax == kScanPoints - 1 || best_x >= bounds.hi * (1.0 - 10.0 * rel_tol);
    result.multimodal = candidates.size() > 1;
    return result;
}

double optimized_rate(RateCurve curve, double eta, const NoiseConfig& noise,
                      const AlphaBounds& bounds, int scan_points) {
    switch (curve) {
        case RateCurve::SingleRailRef:
            return baseline_curves(eta).single_rail_ref;
        case RateCurve::DualRailRef:
            return baseline_curves(eta).dual_rail_ref;
        case RateCurve::CapHalf:
            return 0.5;
        default:
            return optimize_alpha(*curve_protocol(curve), eta, noise, bounds,
                                  1e-6, scan_points)
                .rate.rate;
    }
}

void SweepSpec::validate() const {
    if (curves.empty()) throw std::domain_error("sweep: no curves requested");
    if (points < 1) throw std::domain_error("sweep: points must be >= 1");
    if (points > 1 && !(loss_db_min < loss_db_max)) {
        throw std::domain_error("sweep: need loss_db_min < loss_db_max");
    }
    if (!(loss_db_min >= 0.0)) {
        throw std::domain_error("sweep: loss_db_min must be >= 0");
    }
    if (!(alpha_bounds.lo > 0.0 && alpha_bounds.lo < alpha_bounds.hi)) {
        throw std::domain_error("sweep: bad alpha bounds");
    }
    if (!optimize && !(fixed_alpha >= 0.0 && std::isfinite(fixed_alpha))) {
        throw std::domain_error("sweep: bad fixed alpha");
    }
    noise.validate();
}

std::vector<double> SweepSpec::loss_grid_db() const {
    std::vector<double> grid(points);
    if (points == 1) {
        grid[0] = loss_db_min;
        return grid;
    }
    // Linear in dB and log-spaced in eta are the same grid; both are kept
    // so configs can name either axis.
    for (int i = 0; i < points; ++i) {
        grid[i] = loss_db_min + i * (loss_db_max - loss_db_min) / (points - 1);
    }
    if (spacing == SweepSpacing::LogEta) {
        const double lg_hi = std::log(eta_from_loss_db(loss_db_min));
        const double lg_lo = std::log(eta_from_loss_db(loss_db_max));
        for (int i = 0; i < points; ++i) {
            const double lg = lg_hi + i * (lg_lo - lg_hi) / (points - 1);
            grid[i] = loss_db_from_eta(std::exp(lg));
        }
    }
    return grid;
}

std::vector<SweepRow> sweep_loss(const SweepSpec& spec) {
    spec.validate();
    const std::vector<double> grid = spec.loss_grid_db();

    std::vector<RateCurve> curves = spec.curves;
    std::sort(curves.begin(), curves.end());
    curves.erase(std::unique(curves.begin(), curves.end()), curves.end());

    std::vector<SweepRow> rows(curves.size() * grid.size());
    parallel_for(static_cast<int>(rows.size()), [&](int task) {
        const RateCurve curve = curves[task / grid.size()];
        const double loss_db = grid[task % grid.size()];
        const double eta = eta_from_loss_db(loss_db);

        SweepRow row;
        row.curve = curve;
        row.loss_db = loss_db;
        row.eta = eta;
        row.bound_midpoint = repeaterless_bound_midpoint(eta);
        row.bound_direct = repeaterless_bound_direct(eta);

        const std::optional<Protocol> protocol = curve_protocol(curve);
        if (!protocol) {
            row.rate = optimized_rate(curve, eta, spec.noise, spec.alpha_bounds);
            row.flags = "reference-asymptote";
        } else if (spec.optimize) {
            const OptimizeResult opt = optimize_alpha(
                *protocol, eta, spec.noise, spec.alpha_bounds);
            row.alpha = opt.alpha_star;
            row.p_success = opt.rate.p_success;
            row.hashing = opt.rate.hashing;
            row.rate = opt.rate.rate;
            if (opt.boundary) row.flags = "boundary";
            if (opt.multimodal) {
                row.flags += row.flags.empty() ? "multimodal" : ";multimodal";
            }
        } else {
            const RatePoint rp =
                rate_composed(*protocol, spec.fixed_alpha, eta, spec.noise);
            row.alpha = spec.fixed_alpha;
            row.p_success = rp.p_success;
            row.hashing = rp.hashing;
            row.rate = rp.rate;
        }
        rows[task] = std::move(row);
    });
    return rows;
}

CrossoverResult crossover_loss(RateCurve a, RateCurve b,
                               const NoiseConfig& noise, double bracket_lo_db,
                               double bracket_hi_db, const AlphaBounds& bounds,
                               double tol_db, int scan_points) {
    if (!(bracket_lo_db < bracket_hi_db) || !(tol_db > 0.0)) {
        throw std::domain_error("crossover_loss: bad bracket or tolerance");
    }
    const auto diff = [&](double loss_db) {
        const double eta = eta_from_loss_db(loss_db);
        return optimized_rate(a, eta, noise, bounds, scan_points) -
               optimized_rate(b, eta, noise, bounds, scan_points);
    };
    double lo = bracket_lo_db, hi = bracket_hi_db;
    double f_lo = diff(lo);
    double f_hi = diff(hi);
    if (f_lo == 0.0 || f_hi == 0.0 || (f_lo > 0.0) == (f_hi > 0.0)) {
        return {false, 0.0};
    }
    while (hi - lo > tol_db) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = diff(mid);
        if (f_mid == 0.0) return {true, mid};
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return {true, 0.5 * (lo + hi)};
}

}  // namespace cslink

// Command-line front end: rate / optimize / sweep / oracle-check / ghz.
// Exit codes: 0 success, 1 usage or validation error, 2 numerical or
// verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <clocale>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cslink/errors.hpp"
#include "cslink/ghz.hpp"
#include "cslink/nonidealities.hpp"
#include "cslink/oracle.hpp"
#include "cslink/protocols.hpp"
#include "cslink/sweep.hpp"

namespace {

using nlohmann::json;
using namespace cslink;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

std::string format_g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// --- shared option groups ----------------------------------------------

struct LinkArgs {
    double eta = -1.0;
    double loss_db = -1.0;

    void attach(CLI::App* cmd, bool required) {
        auto* eta_opt = cmd->add_option("--eta", eta, "end-to-end transmissivity in (0, 1]");
        auto* db_opt =
            cmd->add_option("--loss-db", loss_db, "end-to-end loss in dB (eta = 10^(-dB/10))");
        eta_opt->excludes(db_opt);
        db_opt->excludes(eta_opt);
        if (required) {
            // exactly one of the two
            cmd->parse_complete_callback([cmd] {
                if (cmd->count("--eta") == 0 && cmd->count("--loss-db") == 0) {
                    throw CLI::RequiredError("--eta or --loss-db");
                }
            });
        }
    }
    double resolve_eta(const CLI::App* cmd) const {
        return cmd->count("--loss-db") > 0 ? eta_from_loss_db(loss_db) : eta;
    }
};

struct NoiseArgs {
    NoiseConfig noise;

    void attach(CLI::App* cmd) {
        cmd->add_option("--epsilon", noise.epsilon,
                        "input power mismatch epsilon in [0, 0.5)");
        cmd->add_option("--dark", noise.p_dark,
                        "per-detector dark-click probability in [0, 0.1]");
        cmd->add_option("--visibility", noise.visibility,
                        "mode-match visibility in (0, 1]");
    }
};

// --- flat key=value config files ------------------------------------------

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

std::vector<ConfigEntry> read_flat_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw CLI::ValidationError("--config", "cannot read config file " + path);
    }
    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::vector<ConfigEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw CLI::ValidationError("--config",
                                       "line " + std::to_string(line_no) +
                                           " is not a key=value entry");
        }
        entries.push_back({trim(stripped.substr(0, eq)),
                           trim(stripped.substr(eq + 1)), line_no});
    }
    return entries;
}

double config_double(const ConfigEntry& e) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(e.value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != e.value.size()) {
        throw CLI::ValidationError(
            "--config", "bad numeric value for '" + e.key + "': " + e.value);
    }
    return x;
}

[[noreturn]] void unknown_config_key(const ConfigEntry& e) {
    throw CLI::ValidationError("--config", "unknown key '" + e.key +
                                               "' on line " +
                                               std::to_string(e.line));
}

Protocol parse_protocol_or_throw(const std::string& name) {
    const auto curve = parse_curve(name);
    if (curve) {
        const auto p = curve_protocol(*curve);
        if (p) return *p;
    }
    throw CLI::ValidationError("--protocol",
                               "unknown protocol '" + name +
                                   "' (expected ctw, cow-usd or cow-dr)");
}

json rate_point_json(const std::string& protocol, const RatePoint& rp) {
    return json{{"protocol", protocol},   {"eta", rp.eta},
                {"loss_db", loss_db_from_eta(rp.eta)}, {"alpha", rp.alpha},
                {"p_success", rp.p_success}, {"hashing", rp.hashing},
                {"rate", rp.rate}};
}

// --- rate ----------------------------------------------------------------

struct RateCmd {
    std::string protocol;
    double alpha = 0.0;
    LinkArgs link;
    NoiseArgs noise;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("rate", "evaluate one operating point");
        cmd->add_option("--protocol", protocol, "ctw, cow-usd or cow-dr")->required();
        cmd->add_option("--alpha", alpha, "coherent-state amplitude (>= 0)")->required();
        link.attach(cmd, true);
        noise.attach(cmd);
        cmd->final_callback([this, cmd] { run(cmd); });
    }

    void run(const CLI::App* cmd) const {
        const Protocol p = parse_protocol_or_throw(protocol);
        const RatePoint rp =
            rate_composed(p, alpha, link.resolve_eta(cmd), noise.noise);
        std::cout << rate_point_json(protocol, rp).dump(2) << "\n";
    }
};

// --- optimize --------------------------------------------------------------

struct OptimizeCmd {
    std::string protocol;
    LinkArgs link;
    NoiseArgs noise;
    AlphaBounds bounds;
    double tolerance = 1e-6;

    void attach(CLI::App& app) {
        auto* cmd =
            app.add_subcommand("optimize", "optimize alpha at one loss point");
        cmd->add_option("--protocol", protocol)->required();
        link.attach(cmd, true);
        noise.attach(cmd);
        cmd->add_option("--alpha-min", bounds.lo, "search box lower edge");
        cmd->add_option("--alpha-max", bounds.hi, "search box upper edge");
        cmd->add_option("--tolerance", tolerance, "relative refinement tolerance");
        cmd->final_callback([this, cmd] { run(cmd); });
    }

    void run(const CLI::App* cmd) const {
        const Protocol p = parse_protocol_or_throw(protocol);
        const OptimizeResult opt = optimize_alpha(p, link.resolve_eta(cmd),
                                                  noise.noise, bounds, tolerance);
        json out = rate_point_json(protocol, opt.rate);
        out["alpha_star"] = opt.alpha_star;
        out["boundary"] = opt.boundary;
        out["multimodal"] = opt.multimodal;
        std::cout << out.dump(2) << "\n";
    }
};

// --- sweep -----------------------------------------------------------------

struct SweepCmd {
    std::string config_path;
    std::string protocols = "ctw,cow-usd,cow-dr";
    double loss_db_min = 0.01;
    double loss_db_max = 40.0;
    int points = 50;
    std::string spacing = "linear-db";
    NoiseArgs noise;
    double alpha = -1.0;
    bool optimize_flag = false;
    AlphaBounds bounds;
    std::string out_path;
    CLI::App* cmd = nullptr;

    void attach(CLI::App& app) {
        cmd = app.add_subcommand("sweep", "rate-vs-loss table (CSV)");
        cmd->add_option("--config", config_path,
                        "flat key=value config file; flags take precedence");
        cmd->add_option("--protocol", protocols,
                        "comma-separated curves: ctw, cow-usd, cow-dr, "
                        "single-rail-ref, dual-rail-ref");
        cmd->add_option("--loss-db-min", loss_db_min);
        cmd->add_option("--loss-db-max", loss_db_max);
        cmd->add_option("--points", points);
        cmd->add_option("--spacing", spacing, "linear-db or log-eta");
        noise.attach(cmd);
        cmd->add_option("--alpha", alpha, "fixed amplitude (disables optimization)");
        cmd->add_flag("--optimize-alpha", optimize_flag,
                      "optimize alpha per point (default unless --alpha given)");
        cmd->add_option("--alpha-min", bounds.lo);
        cmd->add_option("--alpha-max", bounds.hi);
        cmd->add_option("--out", out_path, "output CSV path (default: stdout)");
        cmd->final_callback([this] { run(); });
    }

    // Applies `key=value` lines to any option not already set on the command
    // line. Unknown keys are errors.
    void apply_config(bool& alpha_in_config) {
        for (const ConfigEntry& e : read_flat_config(config_path)) {
            const bool flag_set = cmd->count("--" + e.key) > 0;
            if (e.key == "protocol") {
                if (!flag_set) protocols = e.value;
            } else if (e.key == "loss-db-min") {
                if (!flag_set) loss_db_min = config_double(e);
            } else if (e.key == "loss-db-max") {
                if (!flag_set) loss_db_max = config_double(e);
            } else if (e.key == "points") {
                if (!flag_set) points = static_cast<int>(config_double(e));
            } else if (e.key == "spacing") {
                if (!flag_set) spacing = e.value;
            } else if (e.key == "epsilon") {
                if (!flag_set) noise.noise.epsilon = config_double(e);
            } else if (e.key == "dark") {
                if (!flag_set) noise.noise.p_dark = config_double(e);
            } else if (e.key == "visibility") {
                if (!flag_set) noise.noise.visibility = config_double(e);
            } else if (e.key == "alpha") {
                alpha_in_config = true;
                if (!flag_set) alpha = config_double(e);
            } else if (e.key == "optimize-alpha") {
                if (!flag_set) {
                    if (e.value == "true" || e.value == "1") {
                        optimize_flag = true;
                    } else if (e.value == "false" || e.value == "0") {
                        optimize_flag = false;
                    } else {
                        throw CLI::ValidationError(
                            "--config", "bad boolean for 'optimize-alpha'");
                    }
                }
            } else if (e.key == "alpha-min") {
                if (!flag_set) bounds.lo = config_double(e);
            } else if (e.key == "alpha-max") {
                if (!flag_set) bounds.hi = config_double(e);
            } else if (e.key == "out") {
                if (!flag_set) out_path = e.value;
            } else {
                unknown_config_key(e);
            }
        }
    }

    SweepSpec build_spec(bool alpha_in_config) const {
        SweepSpec spec;
        spec.curves.clear();
        std::stringstream ss(protocols);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const auto curve = parse_curve(tok);
            if (!curve) {
                throw CLI::ValidationError("--protocol", "unknown curve '" + tok + "'");
            }
            spec.curves.push_back(*curve);
        }
        spec.loss_db_min = loss_db_min;
        spec.loss_db_max = loss_db_max;
        spec.points = points;
        if (spacing == "linear-db") {
            spec.spacing = SweepSpacing::LinearDb;
        } else if (spacing == "log-eta") {
            spec.spacing = SweepSpacing::LogEta;
        } else {
            throw CLI::ValidationError("--spacing", "expected linear-db or log-eta");
        }
        spec.noise = noise.noise;
        spec.alpha_bounds = bounds;
        const bool alpha_given = cmd->count("--alpha") > 0 || alpha_in_config;
        spec.optimize = optimize_flag || !alpha_given;
        if (alpha_given) spec.fixed_alpha = alpha;
        return spec;
    }

    static std::string csv_text(const std::vector<SweepRow>& rows) {
        std::string text =
            "protocol,loss_db,eta,alpha,p_success,hashing,rate,"
            "bound_midpoint,bound_direct,flags\n";
        for (const auto& r : rows) {
            text += curve_name(r.curve);
            for (double x : {r.loss_db, r.eta, r.alpha, r.p_success, r.hashing,
                             r.rate, r.bound_midpoint, r.bound_direct}) {
                text += ',';
                text += format_g12(x);
            }
            text += ',';
            text += r.flags;
            text += '\n';
        }
        return text;
    }

    void run() {
        bool alpha_in_config = false;
        if (!config_path.empty()) apply_config(alpha_in_config);
        const SweepSpec spec = build_spec(alpha_in_config);
        const std::vector<SweepRow> rows = sweep_loss(spec);
        const std::string text = csv_text(rows);
        if (out_path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(out_path, std::ios::binary);
        if (!f || !(f << text)) {
            throw std::runtime_error("cannot write output file " + out_path);
        }
        f.close();

        json meta{{"command", "sweep"},
                  {"rows", rows.size()},
                  {"curves", protocols},
                  {"loss_db_min", spec.loss_db_min},
                  {"loss_db_max", spec.loss_db_max},
                  {"points", spec.points},
                  {"spacing", spacing},
                  {"optimize", spec.optimize},
                  {"epsilon", spec.noise.epsilon},
                  {"p_dark", spec.noise.p_dark},
                  {"visibility", spec.noise.visibility},
                  {"generated_unix_time", static_cast<long long>(std::time(nullptr))}};
        if (!spec.optimize) meta["alpha"] = spec.fixed_alpha;
        std::ofstream mf(out_path + ".meta.json", std::ios::binary);
        if (!mf || !(mf << meta.dump(2) << "\n")) {
            throw std::runtime_error("cannot write metadata sidecar");
        }
    }
};

// --- oracle-check ------------------------------------------------------------

struct OracleCheckCmd {
    std::string protocol;
    double alpha = 0.0;
    LinkArgs link;
    int cutoff = 0;
    double tolerance = 0.0;  // 0: per-protocol default
    CLI::App* cmd = nullptr;
    mutable bool passed = true;

    void attach(CLI::App& app) {
        cmd = app.add_subcommand(
            "oracle-check", "compare closed forms against the Fock simulation");
        cmd->add_option("--protocol", protocol)->required();
        cmd->add_option("--alpha", alpha)->required();
        link.attach(cmd, true);
        cmd->add_option("--cutoff", cutoff, "pulse-mode cutoff (0 = auto)");
        cmd->add_option("--tolerance", tolerance,
                        "pass threshold (0 = per-protocol default)");
        cmd->final_callback([this] { run(); });
    }

    struct Report {
        json checks = json::array();
        double max_dev = 0.0;

        void add(const std::string& name, double analytic, double oracle,
                 bool informational = false) {
            const double dev = std::abs(analytic - oracle);
            json c{{"name", name},
                   {"analytic", analytic},
                   {"oracle", oracle},
                   {"abs_dev", dev}};
            if (informational) c["informational"] = true;
            checks.push_back(c);
            if (!informational) max_dev = std::max(max_dev, dev);
        }
    };

    static double state_dev(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
        return (a - b).norm();
    }

    void check_ctw(Report& rep, json& flags, double eta) const {
        const OracleOptions opts{cutoff, 1e-12, HybridState::kDefaultAmplitudeCap};
        const OracleRun run = run_ctw_oracle(alpha, eta, opts);
        const RatePoint rp = ctw_rate(alpha, eta);
        const auto analytic = ctw_outcomes(alpha, eta);

        double oracle_success = 0.0;
        for (const auto label : {HeraldLabel::D1Even, HeraldLabel::D1Odd,
                                 HeraldLabel::D2Even, HeraldLabel::D2Odd}) {
            oracle_success += run.outcome(label).probability;
        }
        rep.add("p_success", rp.p_success, oracle_success);

        const double t = ctw_dephasing(alpha, eta);
        const double mu = 2.0 * std::sqrt(eta) * alpha * alpha;
        const CatNorms norms = cat_norms(alpha * std::sqrt(2.0 * std::sqrt(eta)));
        const double sm_even = 0.125 * (1.0 - std::exp(-mu)) * norms.n_even * norms.n_even;
        const double sm_odd = 0.125 * (1.0 - std::exp(-mu)) * norms.n_odd * norms.n_odd;

        {
            const auto& even = run.outcome(HeraldLabel::D1Even);
            if (even.probability > 1e-12) {
                const BellDecomposition dec = bell_diagonal_decompose(even.state);
                rep.add("dephasing_T", t,
                        dec.diagonal.phi_plus - dec.diagonal.phi_minus);
            }
        }
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            const auto& a = analytic[i];
            const auto& o = run.outcome(a.label);
            const std::string base = to_string(a.label);
            rep.add("p[" + base + "] (poisson form)", a.probability, o.probability);
            if (a.label != HeraldLabel::NoClick) {
                rep.add("p[" + base + "] (sm form)",
                        (a.label == HeraldLabel::D1Even || a.label == HeraldLabel::D2Even)
                            ? sm_even
                            : sm_odd,
                        o.probability, /*informational=*/true);
            }
            if (o.probability > 1e-12) {
                rep.add("state_dev[" + base + "]", 0.0, state_dev(a.state, o.state));
                const BellDecomposition dec = bell_diagonal_decompose(o.state);
                if (a.label != HeraldLabel::NoClick) {
                    rep.add("hashing[" + base + "]", 1.0 - binary_entropy(0.5 * (1.0 + t)),
                            hashing_bell_diagonal(dec.diagonal));
                }
            }
        }
        rep.add("p[ambiguous]", 0.0, run.outcome(HeraldLabel::Ambiguous).probability);

        flags.push_back(
            "ctw per-outcome probabilities: the prose cat-norm split "
            "(1-e^{-mu})|N|^2/8 disagrees with the exact Poisson parity split; "
            "totals and hashing agree and the Poisson values are the checked ones");
        flags.push_back(
            "ctw excess-noise class weights use the per-arm sqrt(eta) exponent "
            "e^{-2 sqrt(eta)|alpha|^2}, not e^{-2 eta |alpha|^2}");
    }

    void check_cow_usd(Report& rep, json& flags, double eta) const {
        const OracleOptions opts{cutoff, 1e-12, HybridState::kDefaultAmplitudeCap};
        const OracleRun run = run_cow_usd_oracle(alpha, eta, opts);
        const RatePoint rp = cow_usd_rate(alpha, eta);

        const double d1 = run.outcome(HeraldLabel::D1Click).probability;
        const double d2 = run.outcome(HeraldLabel::D2Click).probability;
        rep.add("p_success", rp.p_success, d1 + d2);
        rep.add("p[d1-click]", 0.5 * rp.p_success, d1);
        rep.add("p[d2-click]", 0.5 * rp.p_success, d2);
        rep.add("p[no-click]", 1.0 - rp.p_success,
                run.outcome(HeraldLabel::NoClick).probability);
        rep.add("p[ambiguous]", 0.0, run.outcome(HeraldLabel::Ambiguous).probability);

        const double tp = cow_dephasing(alpha, eta);
        if (d1 > 1e-12) {
            const BellDecomposition dec =
                bell_diagonal_decompose(run.outcome(HeraldLabel::D1Click).state);
            rep.add("dephasing_T'", tp, dec.diagonal.phi_plus - dec.diagonal.phi_minus);
            rep.add("hashing[d1-click]", 1.0 - binary_entropy(0.5 * (1.0 + tp)),
                    hashing_bell_diagonal(dec.diagonal));
        }
        rep.add("state_dev[no-click]", 0.0,
                state_dev(cow_no_click_state(alpha, eta),
                          run.outcome(HeraldLabel::NoClick).state));

        flags.push_back(
            "cow local oscillator amplitude fixed at alpha sqrt(eta); the "
            "dark port is then exactly dark (the prose also writes |eta alpha>)");
        flags.push_back(
            "cow no-click state derived with prefactor 1/2; the prose 1/sqrt(2) "
            "vector is not normalized");
    }

    void check_cow_dr(Report& rep, json&, double eta) const {
        const OracleOptions opts{cutoff, 1e-12, HybridState::kDefaultAmplitudeCap};
        const DolinarOracleRun run = run_cow_dr_oracle(alpha, eta, opts);
        const RatePoint rp = cow_dr_rate(alpha, eta);

        const double pe_tol = tolerance > 0.0 ? tolerance : 1e-9;
        const double pe_dev =
            std::abs(dolinar_error(alpha * std::sqrt(eta)) - run.error_probability);
        rep.checks.push_back(json{{"name", "helstrom_error_probability"},
                                  {"analytic", dolinar_error(alpha * std::sqrt(eta))},
                                  {"oracle", run.error_probability},
                                  {"abs_dev", pe_dev},
                                  {"tolerance", pe_tol}});
        if (pe_dev > pe_tol) passed = false;

        for (const auto& o : run.outcomes) {
            rep.add("p[" + to_string(o.label) + "]", 0.5, o.probability);
            const BellDecomposition dec = bell_diagonal_decompose(o.state);
            rep.add("hashing[" + to_string(o.label) + "]", rp.hashing,
                    hashing_bell_diagonal(dec.diagonal));
            rep.add("bell_residual[" + to_string(o.label) + "]", 0.0, dec.residual);
        }
    }

    void run() const {
        const double eta = link.resolve_eta(cmd);
        const double tol = tolerance > 0.0
                               ? tolerance
                               : (protocol == "cow-dr" ? 1e-6 : 1e-8);
        Report rep;
        json flags = json::array();
        if (protocol == "ctw") {
            check_ctw(rep, flags, eta);
        } else if (protocol == "cow-usd") {
            check_cow_usd(rep, flags, eta);
        } else if (protocol == "cow-dr") {
            check_cow_dr(rep, flags, eta);
        } else {
            throw CLI::ValidationError("--protocol", "unknown protocol '" + protocol + "'");
        }
        if (rep.max_dev > tol) passed = false;

        json out{{"protocol", protocol},
                 {"alpha", alpha},
                 {"eta", eta},
                 {"loss_db", loss_db_from_eta(eta)},
                 {"cutoff", cutoff == 0 ? json("auto") : json(cutoff)},
                 {"checks", rep.checks},
                 {"max_abs_deviation", rep.max_dev},
                 {"tolerance", tol},
                 {"pass", passed},
                 {"flags", flags}};
        std::cout << out.dump(2) << "\n";
        if (!passed) throw verification_failed("oracle check failed tolerance");
    }

    struct verification_failed : std::runtime_error {
        using std::runtime_error::runtime_error;
    };
};

// --- ghz -----------------------------------------------------------------

struct GhzCmd {
    std::string config_path;
    int n = 2;
    double p = -1.0;
    double eta_cfg = -1.0;
    LinkArgs link;
    NoiseArgs noise;
    std::string policy = "retry-link";
    CLI::App* cmd = nullptr;

    void attach(CLI::App& app) {
        cmd = app.add_subcommand("ghz", "expected rounds to chain an N-GHZ state");
        cmd->add_option("--config", config_path,
                        "flat key=value config file; flags take precedence");
        cmd->add_option("--n", n, "number of memories (>= 2)");
        cmd->add_option("--p", p, "per-link success probability in (0, 1]");
        link.attach(cmd, false);
        noise.attach(cmd);
        cmd->add_option("--policy", policy, "retry-link or restart-chain");
        cmd->final_callback([this] { run(); });
    }

    void run() {
        bool p_in_config = false, link_in_config = false, n_in_config = false;
        if (!config_path.empty()) {
            for (const ConfigEntry& e : read_flat_config(config_path)) {
                const bool flag_set = cmd->count("--" + e.key) > 0;
                if (e.key == "n") {
                    n_in_config = true;
                    if (!flag_set) n = static_cast<int>(config_double(e));
                } else if (e.key == "p") {
                    p_in_config = true;
                    if (!flag_set) p = config_double(e);
                } else if (e.key == "eta") {
                    link_in_config = true;
                    if (!flag_set) eta_cfg = config_double(e);
                } else if (e.key == "loss-db") {
                    link_in_config = true;
                    if (!flag_set) eta_cfg = eta_from_loss_db(config_double(e));
                } else if (e.key == "policy") {
                    if (!flag_set) policy = e.value;
                } else if (e.key == "epsilon") {
                    if (!flag_set) noise.noise.epsilon = config_double(e);
                } else if (e.key == "dark") {
                    if (!flag_set) noise.noise.p_dark = config_double(e);
                } else if (e.key == "visibility") {
                    if (!flag_set) noise.noise.visibility = config_double(e);
                } else {
                    unknown_config_key(e);
                }
            }
        }
        if (cmd->count("--n") == 0 && !n_in_config) {
            throw CLI::RequiredError("--n");
        }

        GhzPolicy pol;
        if (policy == "retry-link") {
            pol = GhzPolicy::RetryLink;
        } else if (policy == "restart-chain") {
            pol = GhzPolicy::RestartChain;
        } else {
            throw CLI::ValidationError("--policy", "expected retry-link or restart-chain");
        }
        const bool have_p = cmd->count("--p") > 0 || p_in_config;
        const bool have_link = cmd->count("--eta") > 0 ||
                               cmd->count("--loss-db") > 0 || link_in_config;
        if (!have_p && !have_link) {
            throw CLI::RequiredError("--p or --eta/--loss-db");
        }

        json out{{"n", n}, {"policy", policy}};
        if (have_p) {
            out["p"] = p;
            out["rounds"] = ghz_expected_rounds({n, p, pol});
            out["rounds_retry_link"] =
                ghz_expected_rounds({n, p, GhzPolicy::RetryLink});
            out["rounds_restart_chain"] =
                ghz_expected_rounds({n, p, GhzPolicy::RestartChain});
        } else {
            const double eta =
                (cmd->count("--eta") > 0 || cmd->count("--loss-db") > 0)
                    ? link.resolve_eta(cmd)
                    : eta_cfg;
            const GhzComparison c = ghz_throughput_compare(n, eta, noise.noise);
            out["eta"] = c.eta;
            out["alpha_star"] = c.alpha_star;
            out["p_coherent"] = c.p_coherent;
            out["rounds_coherent_retry_link"] = c.rounds_coherent;
            out["p_baseline"] = c.p_baseline;
            out["rounds_baseline_restart_chain"] = c.rounds_baseline;
            out["ratio"] = c.ratio;
            out["rounds"] = ghz_expected_rounds({n, c.p_coherent, pol});
        }
        std::cout << out.dump(2) << "\n";
    }
};

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"coherent-state entanglement-link simulator"};
    app.require_subcommand(1);

    RateCmd rate;
    OptimizeCmd optimize;
    SweepCmd sweep;
    OracleCheckCmd oracle_check;
    GhzCmd ghz;
    rate.attach(app);
    optimize.attach(app);
    sweep.attach(app);
    oracle_check.attach(app);
    ghz.attach(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const OracleCheckCmd::verification_failed&) {
        return kExitVerification;
    } catch (const truncation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const unsupported_configuration& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

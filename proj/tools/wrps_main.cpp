// Command-line front end: analyze-rule, enumerate, count-lads, census, estimate, verify.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wrps/decidability.hpp"
#include "wrps/dynamics.hpp"
#include "wrps/experiments.hpp"
#include "wrps/label_graph.hpp"
#include "wrps/rule.hpp"
#include "wrps/tile.hpp"
#include "wrps/verify.hpp"

using nlohmann::json;
using namespace wrps;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Thrown for failed checks so main can map them to exit code 1.
struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string labels_text(const CycleRecord& r) {
    std::string out;
    for (std::size_t j = 0; j < r.labels.size(); ++j) {
        for (State v : r.labels[j]) out += std::to_string(v);
        if (j + 1 < r.labels.size()) out += r.deciding[j] ? " => " : " -> ";
    }
    out += r.deciding.back() ? " =>" : " ->";
    return out;
}

void print_tile(std::ostream& out, const Tile& t) {
    for (int i = 0; i < t.tau(); ++i) {
        out << "    ";
        for (State v : t.row(i)) out << static_cast<int>(v);
        out << '\n';
    }
}

struct AnalyzeArgs {
    int n = 0;
    std::string rule;
    int tau_max = 3;
    int sigma_max = 6;
    bool wrps_only = false;
    long horizon = 0;
    std::uint64_t seed = kDefaultSeed;
    int fill = -1;
    std::uint64_t node_cap = kDefaultNodeCap;
};

int run_analyze(const AnalyzeArgs& a, const std::string& format) {
    const Rule rule = parse_rule(a.rule, a.n);
    if (a.tau_max < 1 || a.sigma_max < 1) {
        throw std::invalid_argument("--tau-max and --sigma-max must be positive");
    }
    if (a.fill >= a.n) {
        throw std::invalid_argument("--fill state must be below n");
    }
    SearchOptions opts;
    opts.sigma_max = a.sigma_max;
    opts.node_cap = a.node_cap;
    std::vector<CycleRecord> ps, wrps;
    for (int tau = 1; tau <= a.tau_max; ++tau) {
        if (!a.wrps_only) {
            for (auto& r : find_ps(rule, tau, opts)) ps.push_back(std::move(r));
        }
        for (auto& r : find_wrps(rule, tau, opts)) wrps.push_back(std::move(r));
    }
    const Perturbation perturbation =
        a.fill >= 0 ? Perturbation::constant(static_cast<State>(a.fill)) : Perturbation::random(a.seed);
    std::vector<VelocityEstimate> velocity;
    for (const auto& r : wrps) {
        velocity.push_back(measure_velocity(rule, r.tile, perturbation, a.horizon));
    }

    if (format == "json") {
        json out = {{"n", a.n},
                    {"rule", format_rule(rule)},
                    {"tau_max", a.tau_max},
                    {"sigma_max", a.sigma_max},
                    {"wrps_only", a.wrps_only},
                    {"perturbation", a.fill >= 0 ? json{{"kind", "constant"}, {"value", a.fill}}
                                                 : json{{"kind", "random"}, {"seed", a.seed}}}};
        if (!a.wrps_only) {
            auto arr = json::array();
            for (const auto& r : ps) {
                json j = r;
                j["wrps"] = r.all_deciding();
                if (auto block = blocking_perturbation(rule, r.tile)) {
                    j["blocking"] = {{"site", block->site}, {"value", block->value}};
                }
                arr.push_back(j);
            }
            out["ps"] = arr;
        }
        auto arr = json::array();
        for (std::size_t k = 0; k < wrps.size(); ++k) {
            json j = wrps[k];
            const auto& v = velocity[k];
            j["velocity"] = {{"horizon", v.horizon},
                             {"v_hat", v.v_hat},
                             {"certified_bound", v.certified_bound ? json(*v.certified_bound) : json(nullptr)},
                             {"certificate_met", v.certificate_met},
                             {"trace", v.trace}};
            arr.push_back(j);
        }
        out["wrps"] = arr;
        std::cout << out.dump(2) << '\n';
    } else if (format == "csv") {
        std::cout << "wrps_index,tau,sigma,t,s_t\n";
        for (std::size_t k = 0; k < wrps.size(); ++k) {
            for (std::size_t t = 0; t < velocity[k].trace.size(); ++t) {
                std::cout << k << ',' << wrps[k].tile.tau() << ',' << wrps[k].tile.sigma() << ',' << t << ','
                          << velocity[k].trace[t] << '\n';
            }
        }
    } else {
        std::cout << "rule " << format_rule(rule) << " (n = " << a.n << "), tau <= " << a.tau_max
                  << ", sigma <= " << a.sigma_max << '\n';
        if (!a.wrps_only) {
            std::cout << ps.size() << " PS\n";
            for (const auto& r : ps) {
                std::cout << "  PS tau=" << r.tile.tau() << " sigma=" << r.tile.sigma() << " lag=" << r.stats.lag
                          << " rank=" << r.stats.rank << (r.all_deciding() ? " [WRPS]" : "") << "  "
                          << labels_text(r) << '\n';
                print_tile(std::cout, r.tile);
            }
        }
        std::cout << wrps.size() << " WRPS\n";
        for (std::size_t k = 0; k < wrps.size(); ++k) {
            const auto& r = wrps[k];
            const auto& v = velocity[k];
            std::cout << "  WRPS tau=" << r.tile.tau() << " sigma=" << r.tile.sigma() << " lag=" << r.stats.lag
                      << " rank=" << r.stats.rank << "  " << labels_text(r) << '\n';
            print_tile(std::cout, r.tile);
            std::cout << "    velocity: v_hat=" << v.v_hat << " over T=" << v.horizon << ", s_T=" << v.trace.back();
            if (v.certified_bound) {
                std::cout << ", certified >= " << *v.certified_bound << (v.certificate_met ? " (met)" : " (NOT met)");
            }
            std::cout << '\n';
        }
    }
    for (const auto& v : velocity) {
        if (v.certified_bound && !v.certificate_met) {
            throw CheckFailed("velocity certificate not met");
        }
    }
    return 0;
}

int run_enumerate(int n, int tau, int sigma, std::uint64_t cap, const std::string& format) {
    std::map<int, std::set<Tile>> classes;
    std::map<int, std::uint64_t> arrays;
    enumerate_simple_tiles(
        n, tau, sigma,
        [&](const Tile& t) {
            const int s = tile_stats(t).s;
            classes[s].insert(canonical_tile(t));
            ++arrays[s];
        },
        cap);
    const int g = std::gcd(tau, sigma);
    auto rows = json::array();
    bool ok = true;
    for (int d = g; d >= 1; --d) {
        if (g % d != 0) continue;
        const int s = tau * sigma / d;
        const std::uint64_t formula = count_simple_tiles(n, tau, sigma, s);
        const std::uint64_t found = classes.contains(s) ? classes[s].size() : 0;
        const bool match = found == formula;
        ok = ok && match;
        rows.push_back({{"s", s}, {"d", d}, {"classes", found}, {"arrays", arrays[s]}, {"formula", formula},
                        {"match", match}});
    }
    if (format == "json") {
        std::cout << json{{"n", n}, {"tau", tau}, {"sigma", sigma}, {"rows", rows}}.dump(2) << '\n';
    } else if (format == "csv") {
        std::cout << "n,tau,sigma,s,d,classes,arrays,formula,match\n";
        for (const auto& r : rows) {
            std::cout << n << ',' << tau << ',' << sigma << ',' << r["s"] << ',' << r["d"] << ',' << r["classes"] << ','
                      << r["arrays"] << ',' << r["formula"] << ',' << (r["match"].get<bool>() ? "true" : "false")
                      << '\n';
        }
    } else {
        std::cout << "simple PS tiles, n=" << n << " tau=" << tau << " sigma=" << sigma << '\n';
        for (const auto& r : rows) {
            std::cout << "  s=" << r["s"] << " d=" << r["d"] << ": " << r["classes"] << " classes (" << r["arrays"]
                      << " arrays), formula " << r["formula"] << (r["match"].get<bool>() ? "" : "  MISMATCH") << '\n';
        }
    }
    if (!ok) throw CheckFailed("census does not match the formula");
    return 0;
}

int run_count_lads(int n, int tau, std::uint64_t cap, const std::string& format) {
    const LadCount c = count_D_exhaustive(n, tau, cap);
    if (format == "json") {
        std::cout << json{{"n", n}, {"tau", tau}, {"count", c.count}, {"total", c.total}, {"formula", c.formula},
                          {"match", c.match}}
                         .dump(2)
                  << '\n';
    } else if (format == "csv") {
        std::cout << "n,tau,count,total,formula,match\n"
                  << n << ',' << tau << ',' << c.count << ',' << c.total << ',' << c.formula << ','
                  << (c.match ? "true" : "false") << '\n';
    } else {
        std::cout << "#D(A,B) for n=" << n << " tau=" << tau << ": " << c.count << " of " << c.total
                  << " LADs; formula " << c.formula << (c.match ? " (match)" : " (MISMATCH)") << '\n';
    }
    if (!c.match) throw CheckFailed("LAD count does not match the formula");
    return 0;
}

PeriodSet grid(int tau_max, int sigma_max) {
    std::vector<std::pair<int, int>> pairs;
    for (int t = 1; t <= tau_max; ++t)
        for (int s = 1; s <= sigma_max; ++s) pairs.emplace_back(t, s);
    return PeriodSet(pairs);
}

void print_report_text(const ExperimentReport& r) {
    std::cout << "n=" << r.n << " periods " << PeriodSet(r.periods).str() << ' '
              << (r.exhaustive ? "exhaustive" : "Monte Carlo") << ": " << r.wrps_rules << "/" << r.total
              << " rules with WRPS, " << r.ps_rules << " with PS\n"
              << "  P = " << r.frequency << " [" << r.ci.lo << ", " << r.ci.hi << "]";
    if (r.exact) std::cout << " exact " << r.exact->str();
    std::cout << "; n*P = " << r.scaled() << " [" << r.scaled_ci().lo << ", " << r.scaled_ci().hi << "]\n";
    for (const auto& [k, c] : r.strata) {
        std::cout << "  tau=" << k.tau << " sigma=" << k.sigma << " lag=" << k.lag << " rank=" << k.rank
                  << ": PS " << c.ps_rules << ", WRPS " << c.wrps_rules << '\n';
    }
}

void print_lag_rows(const char* title, const std::vector<StratumRow>& rows) {
    std::cout << "  " << title << '\n';
    for (const auto& row : rows) {
        std::cout << "    " << row.key << ": WRPS " << row.wrps_rules << "/" << row.total << " = " << row.frequency
                  << " [" << row.ci.lo << ", " << row.ci.hi << "], PS " << row.ps_rules << '\n';
    }
}

struct CensusArgs {
    int n = 3;
    std::string periods;
    int tau_max = 0;
    int sigma_max = 0;
    bool conjectures = false;
    bool by_lag = false;
    std::uint64_t cap = kDefaultRuleCap;
};

int run_census(const CensusArgs& a, unsigned threads, std::uint64_t seed, const std::string& format) {
    if (a.conjectures) {
        const int tm = a.tau_max > 0 ? a.tau_max : 3;
        const int sm = a.sigma_max > 0 ? a.sigma_max : 3;
        const auto scan = conjecture_scan(a.n, tm, sm, std::nullopt, seed, threads);
        if (format == "text") {
            std::cout << "rank >= x - lag over " << scan.tiles << " WRPS tiles (n=" << a.n << ", tau<=" << tm
                      << ", sigma<=" << sm << "): " << scan.counterexamples.size() << " counterexamples\n"
                      << "  tau=2: " << scan.tau2_holding << "/" << scan.tau2_tiles << ", sigma=2: "
                      << scan.sigma2_holding << "/" << scan.sigma2_tiles << ", semi-simple " << scan.semi_simple
                      << '\n';
            for (const auto& c : scan.counterexamples) {
                std::cout << "  counterexample rank=" << c.check.rank << " bound=" << c.check.bound << '\n';
                print_tile(std::cout, c.tile);
            }
        } else {
            std::cout << json(scan).dump(2) << '\n';
        }
        return scan.counterexamples.empty() ? 0 : kExitFailure;
    }
    PeriodSet periods = !a.periods.empty() ? PeriodSet::parse(a.periods)
                        : (a.tau_max > 0 || a.sigma_max > 0)
                            ? grid(std::max(1, a.tau_max), std::max(1, a.sigma_max))
                            : PeriodSet({{1, 1}});
    if (a.by_lag) {
        if (periods.pairs().size() != 1) {
            throw std::invalid_argument("--by-lag needs exactly one period pair");
        }
        const auto [tau, sigma] = periods.pairs().front();
        const LagTable t = lag_stratified_expectation(a.n, tau, sigma, std::nullopt, seed, threads);
        if (format == "text") {
            std::cout << "n=" << a.n << " tau=" << tau << " sigma=" << sigma << " exhaustive\n";
            print_lag_rows("by lag", t.by_lag);
            print_lag_rows("by rank", t.by_rank);
        } else {
            std::cout << json(t).dump(2) << '\n';
        }
        return 0;
    }
    const auto report = exhaustive_probability(a.n, periods, threads, a.cap);
    if (format == "json") {
        json j = report;
        j["asymptotic_constant"] = asymptotic_constant(periods);
        std::cout << j.dump(2) << '\n';
    } else if (format == "csv") {
        std::cout << report_csv(report);
    } else {
        print_report_text(report);
    }
    return 0;
}

struct EstimateArgs {
    std::vector<int> n{4};
    std::string periods = "1x1";
    std::uint64_t samples = 100'000;
    bool by_lag = false;
};

int run_estimate(const EstimateArgs& a, unsigned threads, std::uint64_t seed, const std::string& format) {
    const PeriodSet periods = PeriodSet::parse(a.periods);
    if (a.by_lag) {
        if (periods.pairs().size() != 1) {
            throw std::invalid_argument("--by-lag needs exactly one period pair");
        }
        const auto [tau, sigma] = periods.pairs().front();
        auto tables = json::array();
        for (int n : a.n) {
            const LagTable t = lag_stratified_expectation(n, tau, sigma, a.samples, stream_seed(seed, n), threads);
            if (format == "text") {
                std::cout << "n=" << n << " tau=" << tau << " sigma=" << sigma << " (" << a.samples << " samples)\n";
                print_lag_rows("by lag", t.by_lag);
                print_lag_rows("by rank", t.by_rank);
            }
            tables.push_back(t);
        }
        if (format != "text") std::cout << tables.dump(2) << '\n';
        return 0;
    }
    auto reports = json::array();
    std::string csv;
    for (int n : a.n) {
        // Each n gets its own stream so adding n values leaves the others unchanged.
        const auto r = monte_carlo_probability(n, periods, a.samples, stream_seed(seed, n), threads);
        if (format == "text") print_report_text(r);
        reports.push_back(r);
        const std::string rows = report_csv(r);
        csv += csv.empty() ? rows : rows.substr(rows.find('\n') + 1);
    }
    const AsymptoticConstant c = asymptotic_constant(periods);
    if (format == "json") {
        std::cout << json{{"seed", seed}, {"asymptotic_constant", c}, {"reports", reports}}.dump(2) << '\n';
    } else if (format == "csv") {
        std::cout << csv;
    } else {
        std::cout << "derived constant: " << (c.c ? std::to_string(*c.c) : "none") << " (" << c.derivation << ")\n";
    }
    return 0;
}

int run_verify(const std::string& suite, const VerifyOptions& options, const std::string& format) {
    const auto results = run_suite(suite, options);
    bool ok = true;
    auto arr = json::array();
    for (const auto& r : results) {
        ok = ok && r.passed;
        if (format == "text") {
            std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << std::fixed << std::setprecision(2)
                      << r.seconds << " s)\n       " << std::defaultfloat << r.detail << '\n';
        }
        arr.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    }
    if (format == "json") {
        std::cout << json{{"suite", suite}, {"seed", options.seed}, {"passed", ok}, {"checks", arr}}.dump(2) << '\n';
    } else if (format == "csv") {
        std::cout << "name,passed,seconds\n";
        for (const auto& r : results) std::cout << '"' << r.name << "\"," << r.passed << ',' << r.seconds << '\n';
    }
    return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic and weakly robust periodic solutions of 2-neighbour cellular automata"};
    app.require_subcommand(1);
    std::string format = "text";
    unsigned threads = 0;
    std::optional<std::uint64_t> seed_arg;
    auto add_common = [&](CLI::App* sub, bool seeded) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
        if (seeded) {
            sub->add_option("--seed", seed_arg, "Master seed (default " + std::to_string(kDefaultSeed) + ")");
            sub->add_option("--threads", threads, "Worker threads (0 = all cores)");
        }
    };

    AnalyzeArgs analyze;
    auto* analyze_cmd = app.add_subcommand("analyze-rule", "List PS and WRPS of one rule");
    analyze_cmd->add_option("--n", analyze.n, "Number of states")->required()->check(CLI::Range(2, kMaxStates));
    analyze_cmd->add_option("--rule", analyze.rule, "Rule name, from f(n-1,n-1) down to f(0,0)")->required();
    analyze_cmd->add_option("--tau-max", analyze.tau_max, "Largest temporal period");
    analyze_cmd->add_option("--sigma-max", analyze.sigma_max, "Largest spatial period");
    analyze_cmd->add_flag("--wrps-only", analyze.wrps_only, "Skip the PS listing");
    analyze_cmd->add_option("--velocity-horizon", analyze.horizon, "Steps per velocity run (0 = 10 tau n)");
    analyze_cmd->add_option("--fill", analyze.fill, "Perturb with this constant state instead of random states");
    analyze_cmd->add_option("--node-cap", analyze.node_cap, "Label digraph size limit");
    add_common(analyze_cmd, true);

    int en_n = 3, en_tau = 1, en_sigma = 1;
    std::uint64_t en_cap = kDefaultTileCap;
    auto* enumerate_cmd = app.add_subcommand("enumerate", "Census of simple PS tiles against the closed form");
    enumerate_cmd->add_option("--n", en_n)->required()->check(CLI::Range(1, kMaxStates));
    enumerate_cmd->add_option("--tau", en_tau)->required()->check(CLI::PositiveNumber);
    enumerate_cmd->add_option("--sigma", en_sigma)->required()->check(CLI::PositiveNumber);
    enumerate_cmd->add_option("--cap", en_cap, "Largest number of arrays to scan");
    add_common(enumerate_cmd, false);

    int lad_n = 3, lad_tau = 1;
    std::uint64_t lad_cap = kDefaultLadCap;
    auto* lads_cmd = app.add_subcommand("count-lads", "Exhaustive count of deciding LADs");
    lads_cmd->add_option("--n", lad_n)->required()->check(CLI::Range(2, kMaxStates));
    lads_cmd->add_option("--tau", lad_tau)->required()->check(CLI::PositiveNumber);
    lads_cmd->add_option("--cap", lad_cap, "Largest number of LADs to scan");
    add_common(lads_cmd, false);

    CensusArgs census;
    auto* census_cmd = app.add_subcommand("census", "Exhaustive census over all n-state rules");
    census_cmd->add_option("--n", census.n)->check(CLI::Range(2, kMaxStates));
    census_cmd->add_option("--periods", census.periods, "Period pairs, e.g. 1x1,2x2");
    census_cmd->add_option("--tau-max", census.tau_max, "Use every tau <= this with sigma <= --sigma-max");
    census_cmd->add_option("--sigma-max", census.sigma_max);
    census_cmd->add_flag("--conjectures", census.conjectures, "Scan WRPS tiles for rank >= x - lag");
    census_cmd->add_flag("--by-lag", census.by_lag, "Stratify one period pair by lag and rank");
    census_cmd->add_option("--cap", census.cap, "Largest rule space to enumerate");
    add_common(census_cmd, true);

    EstimateArgs estimate;
    auto* estimate_cmd = app.add_subcommand("estimate", "Monte Carlo estimate of P(WRPS exists)");
    estimate_cmd->add_option("--n", estimate.n, "One or more state counts")->check(CLI::Range(2, kMaxStates));
    estimate_cmd->add_option("--periods", estimate.periods, "Period pairs, e.g. 1x1,2x2");
    estimate_cmd->add_option("--samples", estimate.samples)->check(CLI::PositiveNumber);
    estimate_cmd->add_flag("--by-lag", estimate.by_lag, "Stratify one period pair by lag and rank");
    add_common(estimate_cmd, true);

    std::string suite = "all";
    auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
    verify_cmd->add_option("--suite", suite, "formulas, oracles, conjectures, dynamics, asymptotics or all");
    add_common(verify_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const std::uint64_t seed = seed_arg.value_or(kDefaultSeed);
    try {
        if (*analyze_cmd) {
            analyze.seed = seed;
            return run_analyze(analyze, format);
        }
        if (*enumerate_cmd) return run_enumerate(en_n, en_tau, en_sigma, en_cap, format);
        if (*lads_cmd) return run_count_lads(lad_n, lad_tau, lad_cap, format);
        if (*census_cmd) return run_census(census, threads, seed, format);
        if (*estimate_cmd) {
            std::cerr << "seed " << seed << (seed_arg ? "" : " (default)") << '\n';
            return run_estimate(estimate, threads, seed, format);
        }
        if (*verify_cmd) {
            const auto names = suite_names();
            if (std::find(names.begin(), names.end(), suite) == names.end()) {
                std::cerr << "error: unknown suite '" << suite << "'\n";
                return kExitUsage;
            }
            std::cerr << "seed " << seed << (seed_arg ? "" : " (default)") << '\n';
            return run_verify(suite, VerifyOptions{seed, threads}, format);
        }
    } catch (const CheckFailed& e) {
        std::cerr << "check failed: " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

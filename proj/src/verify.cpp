#include "wrps/verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "wrps/decidability.hpp"
#include "wrps/dynamics.hpp"
#include "wrps/experiments.hpp"
#include "wrps/label.hpp"
#include "wrps/label_graph.hpp"
#include "wrps/rng.hpp"

namespace wrps {

namespace {

CheckResult timed(std::string name, const std::function<bool(std::ostringstream&)>& body) {
    CheckResult r;
    r.name = std::move(name);
    std::ostringstream detail;
    const auto start = std::chrono::steady_clock::now();
    try {
        r.passed = body(detail);
    } catch (const std::exception& e) {
        detail << (detail.tellp() > 0 ? "; " : "") << "exception: " << e.what();
        r.passed = false;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.detail = detail.str();
    return r;
}

unsigned worker_count(const VerifyOptions& o) { return o.threads == 0 ? default_threads() : o.threads; }

Label random_label(SplitMix64& rng, int n, int tau) {
    Label l(static_cast<std::size_t>(tau));
    for (auto& v : l) v = static_cast<State>(rng.below(static_cast<std::uint64_t>(n)));
    return l;
}

// All labels of length tau over Z_n, lexicographic.
std::vector<Label> all_labels(int n, int tau) {
    std::vector<Label> out;
    Label l(static_cast<std::size_t>(tau), 0);
    for (;;) {
        out.push_back(l);
        std::size_t p = l.size();
        while (p > 0 && ++l[p - 1] == n) {
            l[--p] = 0;
        }
        if (p == 0) return out;
    }
}

// Fixed point a with f(a,a) = a such that every state iterates to a under f(a, .).
bool has_robust_fixed_point(const Rule& f) {
    const int n = f.n();
    for (int a = 0; a < n; ++a) {
        const auto sa = static_cast<State>(a);
        if (f(sa, sa) != sa) continue;
        bool all = true;
        for (int c0 = 0; c0 < n && all; ++c0) {
            auto c = static_cast<State>(c0);
            for (int k = 0; k < n; ++k) c = f(sa, c);
            all = c == sa;
        }
        if (all) return true;
    }
    return false;
}

// Weighted least squares of y = c0 + c1/n + c2/n^2; returns (c0, standard error of c0).
std::pair<double, double> fit_constant(const std::vector<double>& ns, const std::vector<double>& ys,
                                       const std::vector<double>& vars) {
    std::array<std::array<double, 3>, 3> m{};
    std::array<double, 3> rhs{};
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const std::array<double, 3> x{1.0, 1.0 / ns[i], 1.0 / (ns[i] * ns[i])};
        const double w = 1.0 / vars[i];
        for (int r = 0; r < 3; ++r) {
            rhs[r] += w * x[r] * ys[i];
            for (int c = 0; c < 3; ++c) m[r][c] += w * x[r] * x[c];
        }
    }
    // Inverse by cofactors.
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (std::abs(det) < 1e-300) throw std::runtime_error("singular fit");
    const std::array<double, 3> row0{(m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det,
                                     -(m[0][1] * m[2][2] - m[0][2] * m[2][1]) / det,
                                     (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det};
    const double c0 = row0[0] * rhs[0] + row0[1] * rhs[1] + row0[2] * rhs[2];
    return {c0, std::sqrt(row0[0])};
}

}  // namespace

CheckResult check_worked_example() {
    return timed("worked example: rule 102222210 has the tau=3, sigma=6 WRPS", [](std::ostringstream& d) {
        const auto start = std::chrono::steady_clock::now();
        const Rule rule = parse_rule("102222210", 3);
        const Tile expected = canonical_tile(Tile(3, {{0, 2, 2, 2, 1, 1}, {2, 2, 1, 1, 0, 2}, {1, 1, 0, 2, 2, 2}}));
        SearchOptions opts;
        opts.sigma_max = 6;
        const auto wrps = find_wrps(rule, 3, opts);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool found = std::ranges::any_of(wrps, [&](const CycleRecord& r) { return r.tile == expected; });
        d << wrps.size() << " WRPS with tau=3, sigma<=6; worked tile " << (found ? "found" : "missing") << " in "
          << secs << " s";
        return found && secs < 1.0;
    });
}

CheckResult check_lad_counts() {
    return timed("LAD count #D(A,B) = n^(tau(n-2)) (n^tau - (n-1)^tau)", [](std::ostringstream& d) {
        bool ok = true;
        for (auto [n, tau] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {4, 1}, {2, 2}, {3, 2}}) {
            const LadCount c = count_D_exhaustive(n, tau);
            d << "(" << n << "," << tau << "): " << c.count << " of " << c.total << ", formula " << c.formula << "; ";
            ok = ok && c.match;
        }
        return ok;
    });
}

CheckResult check_deciding_probability(const VerifyOptions& options, std::uint64_t samples) {
    return timed("Monte Carlo P(A=>B) at n=4, tau=2 within 4 sigma of 7/256", [&](std::ostringstream& d) {
        const Label a{0, 1};
        const Label b{0, 0};
        const unsigned threads = worker_count(options);
        std::vector<std::uint64_t> hits(threads, 0);
        parallel_for(samples, threads, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
            for (std::uint64_t k = begin; k < end; ++k) {
                const Rule rule = random_rule(4, stream_seed(options.seed, k));
                hits[w] += in_D(build_lad(rule, a), b) ? 1 : 0;
            }
        });
        std::uint64_t total = 0;
        for (auto h : hits) total += h;
        const double p = p_decides_simple(4, 2).joint.value();
        const double p_hat = static_cast<double>(total) / static_cast<double>(samples);
        const double sd = std::sqrt(p * (1 - p) / static_cast<double>(samples));
        d << "p_hat = " << p_hat << " (" << total << "/" << samples << "), exact 7/256 = " << p
          << ", |z| = " << std::abs(p_hat - p) / sd << ", seed " << options.seed;
        return std::abs(p_hat - p) <= 4 * sd;
    });
}

CheckResult check_simple_census() {
    return timed("simple-tile census = phi(d) C(n,s) (s-1)!", [](std::ostringstream& d) {
        bool ok = true;
        for (auto [n, tau, sigma] : std::vector<std::array<int, 3>>{{3, 1, 1}, {4, 2, 2}, {4, 2, 1}, {5, 2, 2}}) {
            std::map<int, std::set<Tile>> classes;
            std::map<int, std::uint64_t> arrays;
            enumerate_simple_tiles(n, tau, sigma, [&](const Tile& t) {
                const int s = tile_stats(t).s;
                classes[s].insert(canonical_tile(t));
                ++arrays[s];
            });
            const int g = std::gcd(tau, sigma);
            std::set<int> admissible;
            for (int dd = 1; dd <= g; ++dd) {
                if (g % dd == 0) admissible.insert(tau * sigma / dd);
            }
            d << "(" << n << "," << tau << "," << sigma << "):";
            for (int s : admissible) {
                const std::uint64_t formula = count_simple_tiles(n, tau, sigma, s);
                const std::uint64_t found = classes.contains(s) ? classes[s].size() : 0;
                d << " s=" << s << " " << found << "/" << formula;
                ok = ok && found == formula && arrays[s] == found * static_cast<std::uint64_t>(s);
            }
            for (const auto& [s, set] : classes) {
                if (!admissible.contains(s)) {
                    d << " unexpected s=" << s;
                    ok = false;
                }
            }
            d << "; ";
        }
        return ok;
    });
}

CheckResult check_oracle_equivalence(const VerifyOptions& options, std::uint64_t samples) {
    return timed("decides_by_simulation == LAD membership", [&](std::ostringstream& d) {
        std::uint64_t exhaustive = 0, mismatches = 0;
        for (int tau : {1, 2}) {
            const auto labels = all_labels(2, tau);
            enumerate_rules(2, [&](const Rule& rule) {
                for (const auto& a : labels) {
                    const Lad lad = build_lad(rule, a);
                    for (const auto& b : labels) {
                        ++exhaustive;
                        mismatches += decides_by_simulation(rule, a, b) != in_D(lad, b) ? 1 : 0;
                    }
                }
            });
        }
        d << "n=2 exhaustive: " << exhaustive << " triples";
        std::uint64_t random_total = 0, positives = 0;
        for (int n : {3, 4}) {
            for (std::uint64_t k = 0; k < samples; ++k) {
                SplitMix64 rng(stream_seed(stream_seed(options.seed, static_cast<std::uint64_t>(n)), k));
                const Rule rule = random_rule(n, rng);
                const int tau = 1 + static_cast<int>(rng.below(3));
                const Label a = random_label(rng, n, tau);
                Label b = random_label(rng, n, tau);
                if (rng.below(2) == 0) {
                    const auto nbrs = out_neighbors(rule, a);
                    if (!nbrs.empty()) b = nbrs[rng.below(nbrs.size())];
                }
                const bool lad = in_D(build_lad(rule, a), b);
                positives += lad ? 1 : 0;
                mismatches += decides_by_simulation(rule, a, b) != lad ? 1 : 0;
                ++random_total;
            }
        }
        d << "; n=3,4 random: " << random_total << " triples (" << positives << " deciding); mismatches "
          << mismatches;
        return mismatches == 0;
    });
}

CheckResult check_velocity_bound(const VerifyOptions& options, int perturbations) {
    return timed("n=3 census WRPS expand at >= 1/(tau n)", [&](std::ostringstream& d) {
        std::vector<std::pair<int, int>> pairs;
        for (int tau = 1; tau <= 3; ++tau)
            for (int sigma = 1; sigma <= 3; ++sigma) pairs.emplace_back(tau, sigma);
        const PeriodSet periods(pairs);
        const unsigned threads = worker_count(options);
        struct Partial {
            std::uint64_t wrps = 0, runs = 0, violations = 0, uncertified = 0;
            long slowest = 0;  // latest time at which a run reached its target
        };
        std::vector<Partial> parts(threads);
        parallel_for(rule_count(3), threads, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
            auto& p = parts[w];
            for (std::uint64_t idx = begin; idx < end; ++idx) {
                const Rule rule = rule_at(3, idx);
                const auto found = analyze_periods(rule, periods, true).wrps;
                const std::uint64_t base = stream_seed(options.seed, idx);
                std::uint64_t local = 0;
                for (const auto& rec : found) {
                    ++p.wrps;
                    const long tn = static_cast<long>(rec.tile.tau()) * 3;
                    for (int k = 0; k < perturbations; ++k) {
                        const auto run = certify_expansion(rule, rec.tile,
                                                           Perturbation::random(stream_seed(base, local++)), 200 * tn);
                        ++p.runs;
                        if (!run.deciding) ++p.uncertified;
                        if (!run.met) ++p.violations;
                        p.slowest = std::max(p.slowest, run.stopped_at);
                    }
                }
            }
        });
        Partial t;
        for (const auto& p : parts) {
            t.wrps += p.wrps;
            t.runs += p.runs;
            t.violations += p.violations;
            t.uncertified += p.uncertified;
            t.slowest = std::max(t.slowest, p.slowest);
        }
        d << t.wrps << " WRPS, " << t.runs << " runs of T = 200 tau n, violations " << t.violations
          << ", non-deciding " << t.uncertified << ", latest arrival at the target t = " << t.slowest;
        return t.wrps > 0 && t.violations == 0 && t.uncertified == 0;
    });
}

CheckResult check_identity() {
    return timed("combinatorial identity S_m direct == closed form", [](std::ostringstream& d) {
        int cases = 0, bad = 0;
        for (int n = 2; n <= 5; ++n)
            for (int m = 1; m <= 4; ++m)
                for (int k = 0; k <= n - 1; ++k) {
                    const auto v = combinatorial_identity_S(n, m, k);
                    ++cases;
                    if (v.direct != v.closed) {
                        ++bad;
                        d << "mismatch at (" << n << "," << m << "," << k << "): " << v.direct << " vs " << v.closed
                          << "; ";
                    }
                }
        d << cases << " cases, " << bad << " mismatches";
        return bad == 0;
    });
}

CheckResult check_asymptotic_trend(const VerifyOptions& options, std::uint64_t samples) {
    return timed("n P trend: {1x1} levels off near 1, {1x2} decreases", [&](std::ostringstream& d) {
        const PeriodSet fixed({{1, 1}});
        const PeriodSet control({{1, 2}});
        bool ok = true;
        // Exact closed form for {1x1}: 1 - (1 - 1/n^2)^n.
        for (int n : {2, 3}) {
            const auto un = static_cast<std::uint64_t>(n);
            const std::uint64_t den = ipow(un, 2 * un);
            const Fraction closed(den - ipow(un * un - 1, static_cast<unsigned>(n)), den);
            const auto r = exhaustive_probability(n, fixed, options.threads);
            d << "n=" << n << " exact " << r.exact->str() << " (closed " << closed.str() << "); ";
            ok = ok && *r.exact == closed;
        }
        std::vector<double> ns, ys, vars;
        std::vector<Interval> cis;
        for (int n : {4, 6, 8, 12}) {
            const auto r = monte_carlo_probability(n, fixed, samples, stream_seed(options.seed, n), options.threads);
            const double p = std::max(r.frequency, 1.0 / static_cast<double>(samples));
            ns.push_back(n);
            ys.push_back(r.scaled());
            vars.push_back(static_cast<double>(n * n) * p * (1 - p) / static_cast<double>(samples));
            cis.push_back(r.scaled_ci());
            d << "n=" << n << " nP=" << r.scaled() << " [" << r.scaled_ci().lo << "," << r.scaled_ci().hi << "]; ";
        }
        const bool overlap = cis[2].lo <= cis[3].hi && cis[3].lo <= cis[2].hi;
        const auto [c, se] = fit_constant(ns, ys, vars);
        const bool contains_one = std::abs(c - 1.0) <= 1.96 * se;
        d << "n=8/12 CIs " << (overlap ? "overlap" : "disjoint") << "; fitted c = " << c << " +- " << 1.96 * se
          << "; ";
        ok = ok && overlap && contains_one;

        std::vector<double> control_values;
        for (int n : {2, 3}) {
            control_values.push_back(exhaustive_probability(n, control, options.threads).scaled());
        }
        for (int n : {4, 6, 8, 12}) {
            control_values.push_back(
                monte_carlo_probability(n, control, samples, stream_seed(options.seed, 100 + n), options.threads)
                    .scaled());
        }
        d << "control {1x2} nP:";
        bool decreasing = true;
        for (std::size_t i = 0; i < control_values.size(); ++i) {
            d << " " << control_values[i];
            if (i > 0 && !(control_values[i] < control_values[i - 1])) decreasing = false;
        }
        d << (decreasing ? " (decreasing)" : " (NOT decreasing)");
        return ok && decreasing;
    });
}

CheckResult check_conjectures(const VerifyOptions& options) {
    return timed("rank >= x - lag on n=3 WRPS tiles, tau,sigma <= 3", [&](std::ostringstream& d) {
        const auto scan = conjecture_scan(3, 3, 3, std::nullopt, options.seed, options.threads);
        d << scan.tiles << " tiles, " << scan.counterexamples.size() << " counterexamples; tau=2: "
          << scan.tau2_holding << "/" << scan.tau2_tiles << " hold; sigma=2: " << scan.sigma2_holding << "/"
          << scan.sigma2_tiles << " hold; semi-simple " << scan.semi_simple;
        return scan.tiles > 0 && scan.counterexamples.empty() && scan.tau2_holding == scan.tau2_tiles &&
               scan.sigma2_holding == scan.sigma2_tiles;
    });
}

CheckResult check_deciding_exact() {
    return timed("P(A=>B) for simple A over all rules", [](std::ostringstream& d) {
        bool ok = true;
        for (auto [n, tau] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3}}) {
            Label a(static_cast<std::size_t>(tau));
            for (int i = 0; i < tau; ++i) a[static_cast<std::size_t>(i)] = static_cast<State>(i);
            const Label b(static_cast<std::size_t>(tau), 0);
            std::uint64_t count = 0;
            enumerate_rules(n, [&](const Rule& rule) { count += in_D(build_lad(rule, a), b) ? 1 : 0; });
            const Fraction found(count, rule_count(n));
            const Fraction expected = p_decides_simple(n, tau).joint;
            d << "(" << n << "," << tau << "): " << found.str() << " vs " << expected.str() << "; ";
            ok = ok && found == expected;
        }
        return ok;
    });
}

CheckResult check_arcs_brute_force(const VerifyOptions& options) {
    return timed("out_neighbors == scan over all labels", [&](std::ostringstream& d) {
        std::uint64_t labels_checked = 0, bad = 0;
        for (auto [n, tau] : std::vector<std::pair<int, int>>{{2, 3}, {3, 1}, {3, 2}, {3, 3}, {4, 2}}) {
            const auto labels = all_labels(n, tau);
            for (std::uint64_t k = 0; k < 50; ++k) {
                const Rule rule = random_rule(n, stream_seed(stream_seed(options.seed, 7), k));
                for (const auto& a : labels) {
                    std::vector<Label> brute;
                    for (const auto& b : labels) {
                        if (right_extends(rule, a, b)) brute.push_back(b);
                    }
                    auto fast = out_neighbors(rule, a);
                    std::ranges::sort(fast);
                    ++labels_checked;
                    bad += fast != brute ? 1 : 0;
                }
            }
        }
        d << labels_checked << " labels, " << bad << " mismatches";
        return bad == 0;
    });
}

CheckResult check_fixed_point_scan() {
    return timed("exists_wrps {1x1} == direct fixed-point scan", [](std::ostringstream& d) {
        const PeriodSet periods({{1, 1}});
        bool ok = true;
        for (int n : {2, 3}) {
            std::uint64_t yes = 0, bad = 0;
            enumerate_rules(n, [&](const Rule& rule) {
                const bool direct = has_robust_fixed_point(rule);
                yes += direct ? 1 : 0;
                bad += direct != exists_wrps(rule, periods).has_value() ? 1 : 0;
            });
            d << "n=" << n << ": " << yes << " rules, " << bad << " mismatches; ";
            ok = ok && bad == 0;
        }
        return ok;
    });
}

CheckResult check_mc_consistency(const VerifyOptions& options) {
    return timed("Monte Carlo at n=2 within 4 sigma of exhaustive", [&](std::ostringstream& d) {
        const PeriodSet periods({{1, 1}, {1, 2}, {2, 1}, {2, 2}});
        const auto exact = exhaustive_probability(2, periods, options.threads);
        const std::uint64_t samples = 50 * exact.total;
        const auto mc = monte_carlo_probability(2, periods, samples, options.seed, options.threads);
        const double p = exact.frequency;
        const double sd = std::sqrt(p * (1 - p) / static_cast<double>(samples));
        d << "exact " << exact.exact->str() << " = " << p << ", Monte Carlo " << mc.frequency << " over " << samples;
        return std::abs(mc.frequency - p) <= 4 * sd + 1e-12;
    });
}

CheckResult check_blocking(const VerifyOptions& options) {
    return timed("non-deciding PS stall under the blocking perturbation", [&](std::ostringstream& d) {
        std::uint64_t non_robust = 0, stalled = 0, robust = 0, robust_unblocked = 0;
        for (std::uint64_t k = 0; k < 500; ++k) {
            const Rule rule = random_rule(3, stream_seed(stream_seed(options.seed, 11), k));
            for (int tau = 1; tau <= 2; ++tau) {
                SearchOptions opts;
                opts.sigma_max = 3;
                for (const auto& rec : find_ps(rule, tau, opts)) {
                    const auto block = blocking_perturbation(rule, rec.tile);
                    if (rec.all_deciding()) {
                        ++robust;
                        robust_unblocked += block ? 0 : 1;
                        continue;
                    }
                    ++non_robust;
                    if (!block) continue;
                    const long tn = static_cast<long>(tau) * 3;
                    const auto est = measure_velocity(rule, rec.tile, *block, 100 * tn);
                    stalled += est.trace.back() < block->site ? 1 : 0;
                }
            }
        }
        d << non_robust << " non-robust PS, " << stalled << " stalled; " << robust << " robust PS, "
          << robust_unblocked << " without a blocker";
        return non_robust > 0 && stalled == non_robust && robust_unblocked == robust;
    });
}

std::vector<std::string_view> suite_names() {
    return {"formulas", "oracles", "conjectures", "dynamics", "asymptotics", "all"};
}

std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& options) {
    std::vector<CheckResult> out;
    const bool all = suite == "all";
    bool known = all;
    if (all || suite == "formulas") {
        known = true;
        out.push_back(check_lad_counts());
        out.push_back(check_deciding_exact());
        out.push_back(check_simple_census());
        out.push_back(check_identity());
    }
    if (all || suite == "oracles") {
        known = true;
        out.push_back(check_oracle_equivalence(options));
        out.push_back(check_arcs_brute_force(options));
        out.push_back(check_fixed_point_scan());
        out.push_back(check_mc_consistency(options));
    }
    if (all || suite == "conjectures") {
        known = true;
        out.push_back(check_conjectures(options));
    }
    if (all || suite == "dynamics") {
        known = true;
        out.push_back(check_worked_example());
        out.push_back(check_blocking(options));
        out.push_back(check_velocity_bound(options));
    }
    if (all || suite == "asymptotics") {
        known = true;
        out.push_back(check_deciding_probability(options));
        out.push_back(check_asymptotic_trend(options));
    }
    if (!known) {
        throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
    }
    return out;
}

}  // namespace wrps

#include "wrps/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wrps/rng.hpp"

namespace wrps {

namespace {

int parse_int(std::string_view s, std::string_view context) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad period entry '" + std::string(context) + "'");
    }
    return v;
}

// Largest sigma requested per tau.
std::map<int, int> sigma_max_by_tau(const PeriodSet& periods) {
    std::map<int, int> out;
    for (const auto& [tau, sigma] : periods.pairs()) {
        out[tau] = std::max(out[tau], sigma);
    }
    return out;
}

struct Tally {
    std::uint64_t total = 0;
    std::uint64_t ps_rules = 0;
    std::uint64_t wrps_rules = 0;
    std::map<StratumKey, StratumCount> strata;
    std::map<int, StratumCount> by_lag;
    std::map<int, StratumCount> by_rank;

    void add(const RuleAnalysis& a) {
        ++total;
        ps_rules += a.ps.empty() ? 0 : 1;
        wrps_rules += a.wrps.empty() ? 0 : 1;
        std::set<StratumKey> ps_keys, wrps_keys;
        std::set<int> ps_lags, wrps_lags, ps_ranks, wrps_ranks;
        for (const auto& r : a.ps) {
            ps_keys.insert({r.tile.tau(), r.tile.sigma(), r.stats.lag, r.stats.rank});
            ps_lags.insert(r.stats.lag);
            ps_ranks.insert(r.stats.rank);
        }
        for (const auto& r : a.wrps) {
            wrps_keys.insert({r.tile.tau(), r.tile.sigma(), r.stats.lag, r.stats.rank});
            wrps_lags.insert(r.stats.lag);
            wrps_ranks.insert(r.stats.rank);
        }
        for (const auto& k : ps_keys) ++strata[k].ps_rules;
        for (const auto& k : wrps_keys) ++strata[k].wrps_rules;
        for (int l : ps_lags) ++by_lag[l].ps_rules;
        for (int l : wrps_lags) ++by_lag[l].wrps_rules;
        for (int r : ps_ranks) ++by_rank[r].ps_rules;
        for (int r : wrps_ranks) ++by_rank[r].wrps_rules;
    }

    void merge(const Tally& other) {
        total += other.total;
        ps_rules += other.ps_rules;
        wrps_rules += other.wrps_rules;
        auto merge_map = [](auto& into, const auto& from) {
            for (const auto& [k, c] : from) {
                into[k].ps_rules += c.ps_rules;
                into[k].wrps_rules += c.wrps_rules;
            }
        };
        merge_map(strata, other.strata);
        merge_map(by_lag, other.by_lag);
        merge_map(by_rank, other.by_rank);
    }
};

unsigned resolve_threads(unsigned threads) { return threads == 0 ? default_threads() : threads; }

// Analyzes `count` rules produced by `make_rule(k)` and aggregates per worker.
Tally run_census(std::uint64_t count, unsigned threads, const PeriodSet& periods,
                 const std::function<Rule(std::uint64_t)>& make_rule) {
    std::vector<Tally> partial(threads);
    parallel_for(count, threads, [&](unsigned worker, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t k = begin; k < end; ++k) {
            partial[worker].add(analyze_periods(make_rule(k), periods));
        }
    });
    Tally out;
    for (const auto& t : partial) {
        out.merge(t);
    }
    return out;
}

ExperimentReport make_report(int n, const PeriodSet& periods, Tally tally, double z) {
    ExperimentReport r;
    r.n = n;
    r.periods = periods.pairs();
    r.total = tally.total;
    r.ps_rules = tally.ps_rules;
    r.wrps_rules = tally.wrps_rules;
    r.strata = std::move(tally.strata);
    r.by_lag = std::move(tally.by_lag);
    r.by_rank = std::move(tally.by_rank);
    r.frequency = static_cast<double>(r.wrps_rules) / static_cast<double>(r.total);
    r.ci = wilson_interval(r.wrps_rules, r.total, z);
    r.z = z;
    r.prng = SplitMix64::kName;
    return r;
}

std::vector<StratumRow> to_rows(const std::map<int, StratumCount>& m, std::uint64_t total, double z) {
    std::vector<StratumRow> rows;
    for (const auto& [key, c] : m) {
        rows.push_back({key, c.wrps_rules, c.ps_rules, total,
                        static_cast<double>(c.wrps_rules) / static_cast<double>(total),
                        wilson_interval(c.wrps_rules, total, z)});
    }
    return rows;
}

nlohmann::json rows_json(const std::vector<StratumRow>& rows, const char* key_name) {
    auto out = nlohmann::json::array();
    for (const auto& r : rows) {
        out.push_back({{key_name, r.key},
                       {"wrps_rules", r.wrps_rules},
                       {"ps_rules", r.ps_rules},
                       {"total", r.total},
                       {"freq", r.frequency},
                       {"ci", {r.ci.lo, r.ci.hi}}});
    }
    return out;
}

nlohmann::json record_json(const ConjectureRecord& rec) {
    const auto& c = rec.check;
    return {{"tile", format_tile_text(rec.tile)},
            {"tau", rec.tile.tau()},
            {"sigma", rec.tile.sigma()},
            {"rank", c.rank},
            {"lag", c.lag},
            {"x", c.x},
            {"bound", c.bound},
            {"holds", c.holds},
            {"tau_tilde", c.tau_tilde},
            {"semi_simple", c.semi_simple},
            {"index_set", c.index_set}};
}

}  // namespace

PeriodSet::PeriodSet(std::vector<std::pair<int, int>> pairs) : pairs_(std::move(pairs)) {
    if (pairs_.empty()) {
        throw std::invalid_argument("period set is empty");
    }
    for (const auto& [tau, sigma] : pairs_) {
        if (tau < 1 || sigma < 1) {
            throw std::invalid_argument("periods must be at least 1");
        }
    }
    std::ranges::sort(pairs_);
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

PeriodSet PeriodSet::parse(std::string_view text) {
    std::vector<std::pair<int, int>> pairs;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        const auto sep = item.find_first_of("x:/");
        if (sep == std::string_view::npos) {
            throw std::invalid_argument("period entry '" + std::string(item) + "' is not of the form TAUxSIGMA");
        }
        pairs.emplace_back(parse_int(item.substr(0, sep), item), parse_int(item.substr(sep + 1), item));
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    }
    return PeriodSet(std::move(pairs));
}

bool PeriodSet::contains(int tau, int sigma) const {
    return std::ranges::binary_search(pairs_, std::make_pair(tau, sigma));
}

std::string PeriodSet::str() const {
    std::string out;
    for (const auto& [tau, sigma] : pairs_) {
        if (!out.empty()) out += ',';
        out += std::to_string(tau) + "x" + std::to_string(sigma);
    }
    return out;
}

RuleAnalysis analyze_periods(const Rule& rule, const PeriodSet& periods, bool wrps_only, std::uint64_t node_cap) {
    RuleAnalysis out;
    auto keep = [&](std::vector<CycleRecord>& into, std::vector<CycleRecord> found) {
        for (auto& r : found) {
            if (periods.contains(r.tile.tau(), r.tile.sigma())) {
                into.push_back(std::move(r));
            }
        }
    };
    for (const auto& [tau, sigma_max] : sigma_max_by_tau(periods)) {
        SearchOptions opts;
        opts.sigma_max = sigma_max;
        opts.node_cap = node_cap;
        if (!wrps_only) {
            keep(out.ps, find_ps(rule, tau, opts));
        }
        keep(out.wrps, find_wrps(rule, tau, opts));
    }
    return out;
}

std::optional<CycleRecord> exists_wrps(const Rule& rule, const PeriodSet& periods, std::uint64_t node_cap) {
    for (const auto& [tau, sigma_max] : sigma_max_by_tau(periods)) {
        SearchOptions opts;
        opts.sigma_max = sigma_max;
        opts.node_cap = node_cap;
        for (auto& r : find_wrps(rule, tau, opts)) {
            if (periods.contains(r.tile.tau(), r.tile.sigma())) {
                return std::move(r);
            }
        }
    }
    return std::nullopt;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

void parallel_for(std::uint64_t count, unsigned threads,
                  const std::function<void(unsigned, std::uint64_t, std::uint64_t)>& body) {
    threads = std::max(1u, threads);
    if (threads == 1 || count < 2) {
        body(0, 0, count);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (count + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::uint64_t begin = std::min<std::uint64_t>(count, w * chunk);
        const std::uint64_t end = std::min<std::uint64_t>(count, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
            try {
                body(w, begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

ExperimentReport exhaustive_probability(int n, const PeriodSet& periods, unsigned threads, std::uint64_t cap,
                                        double z) {
    const auto start = std::chrono::steady_clock::now();
    std::uint64_t count = 0;
    try {
        count = rule_count(n);
    } catch (const std::overflow_error&) {
        throw std::length_error("rule space for n = " + std::to_string(n) + " exceeds the cap");
    }
    if (count > cap) {
        throw std::length_error("rule space n^(n^2) = " + std::to_string(count) + " exceeds cap " +
                                std::to_string(cap));
    }
    threads = resolve_threads(threads);
    auto report = make_report(n, periods, run_census(count, threads, periods, [n](std::uint64_t k) {
                                  return rule_at(n, k);
                              }),
                              z);
    report.exhaustive = true;
    report.exact = Fraction(report.wrps_rules, report.total);
    report.cap = cap;
    report.threads = threads;
    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ExperimentReport monte_carlo_probability(int n, const PeriodSet& periods, std::uint64_t samples,
                                         std::uint64_t seed, unsigned threads, double z) {
    if (samples == 0) {
        throw std::invalid_argument("monte_carlo_probability: samples must be at least 1");
    }
    const auto start = std::chrono::steady_clock::now();
    threads = resolve_threads(threads);
    auto report = make_report(n, periods, run_census(samples, threads, periods, [n, seed](std::uint64_t k) {
                                  return random_rule(n, stream_seed(seed, k));
                              }),
                              z);
    report.seed = seed;
    report.cap = samples;
    report.threads = threads;
    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

AsymptoticConstant asymptotic_constant(const PeriodSet& periods) {
    AsymptoticConstant out;
    out.leading_order = std::numeric_limits<int>::max();
    std::uint64_t c = 0;
    bool any = false;
    std::string terms;
    for (const auto& [tau, sigma] : periods.pairs()) {
        out.leading_order = std::min(out.leading_order, sigma / std::gcd(tau, sigma));
        if (tau % sigma == 0) {
            any = true;
            c += totient(static_cast<std::uint64_t>(sigma));
            if (!terms.empty()) terms += " + ";
            terms += "phi(" + std::to_string(sigma) + ")";
        }
    }
    if (any) {
        out.c = c;
        out.derivation = "sigma | tau gives d = sigma, x = 1, k = tau and C(n,k)(k-1)!/n^k -> 1/k, so each such pair "
                         "contributes phi(sigma): c = " +
                         terms + " = " + std::to_string(c);
    } else {
        out.derivation = "no pair with sigma | tau; P is of order 1/n^" + std::to_string(out.leading_order);
    }
    return out;
}

LagTable lag_stratified_expectation(int n, int tau, int sigma, std::optional<std::uint64_t> samples,
                                    std::uint64_t seed, unsigned threads, double z) {
    const PeriodSet periods({{tau, sigma}});
    const ExperimentReport r = samples ? monte_carlo_probability(n, periods, *samples, seed, threads, z)
                                       : exhaustive_probability(n, periods, threads, kDefaultRuleCap, z);
    LagTable t;
    t.n = n;
    t.tau = tau;
    t.sigma = sigma;
    t.exhaustive = r.exhaustive;
    t.by_lag = to_rows(r.by_lag, r.total, z);
    t.by_rank = to_rows(r.by_rank, r.total, z);
    return t;
}

ConjectureScan conjecture_scan(int n, int tau_max, int sigma_max, std::optional<std::uint64_t> samples,
                               std::uint64_t seed, unsigned threads) {
    if (tau_max < 1 || sigma_max < 1) {
        throw std::invalid_argument("conjecture_scan: period bounds must be positive");
    }
    std::vector<std::pair<int, int>> pairs;
    for (int tau = 1; tau <= tau_max; ++tau) {
        for (int sigma = 1; sigma <= sigma_max; ++sigma) {
            pairs.emplace_back(tau, sigma);
        }
    }
    const PeriodSet periods(std::move(pairs));
    ConjectureScan scan;
    scan.n = n;
    scan.tau_max = tau_max;
    scan.sigma_max = sigma_max;
    scan.exhaustive = !samples;
    std::uint64_t count = 0;
    if (samples) {
        count = *samples;
    } else {
        count = rule_count(n);
        if (count > kDefaultRuleCap) {
            throw std::length_error("conjecture_scan: rule space exceeds the cap; pass a sample count");
        }
    }
    scan.rules = count;
    threads = resolve_threads(threads);
    std::vector<std::set<Tile>> partial(threads);
    parallel_for(count, threads, [&](unsigned worker, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t k = begin; k < end; ++k) {
            const Rule rule = samples ? random_rule(n, stream_seed(seed, k)) : rule_at(n, k);
            for (auto& rec : analyze_periods(rule, periods, true).wrps) {
                partial[worker].insert(std::move(rec.tile));
            }
        }
    });
    std::set<Tile> tiles;
    for (auto& p : partial) {
        tiles.merge(p);
    }
    scan.tiles = tiles.size();
    for (const auto& tile : tiles) {
        ConjectureRecord rec{tile, check_rank_conjecture(tile)};
        scan.semi_simple += rec.check.semi_simple ? 1 : 0;
        if (tile.tau() == 2) {
            ++scan.tau2_tiles;
            scan.tau2_holding += rec.check.holds ? 1 : 0;
        }
        if (tile.sigma() == 2) {
            ++scan.sigma2_tiles;
            scan.sigma2_holding += rec.check.holds ? 1 : 0;
        }
        if (!rec.check.holds) {
            scan.counterexamples.push_back(rec);
        }
        scan.records.push_back(std::move(rec));
    }
    return scan;
}

std::string report_csv(const ExperimentReport& report) {
    std::ostringstream out;
    const std::string seed = report.seed ? std::to_string(*report.seed) : "";
    out << "n,tau,sigma,lag,rank,count,total,freq,ci_lo,ci_hi,seed\n";
    for (const auto& [key, c] : report.strata) {
        const Interval ci = wilson_interval(c.wrps_rules, report.total, report.z);
        out << report.n << ',' << key.tau << ',' << key.sigma << ',' << key.lag << ',' << key.rank << ','
            << c.wrps_rules << ',' << report.total << ','
            << static_cast<double>(c.wrps_rules) / static_cast<double>(report.total) << ',' << ci.lo << ','
            << ci.hi << ',' << seed << '\n';
    }
    out << report.n << ",*,*,*,*," << report.wrps_rules << ',' << report.total << ',' << report.frequency << ','
        << report.ci.lo << ',' << report.ci.hi << ',' << seed << '\n';
    return out.str();
}

void to_json(nlohmann::json& j, const ExperimentReport& r) {
    auto strata = nlohmann::json::array();
    for (const auto& [k, c] : r.strata) {
        strata.push_back({{"tau", k.tau},
                          {"sigma", k.sigma},
                          {"lag", k.lag},
                          {"rank", k.rank},
                          {"ps_rules", c.ps_rules},
                          {"wrps_rules", c.wrps_rules}});
    }
    auto periods = nlohmann::json::array();
    for (const auto& [tau, sigma] : r.periods) {
        periods.push_back({tau, sigma});
    }
    j = {{"n", r.n},
         {"periods", periods},
         {"mode", r.exhaustive ? "exhaustive" : "monte_carlo"},
         {"total", r.total},
         {"ps_rules", r.ps_rules},
         {"wrps_rules", r.wrps_rules},
         {"freq", r.frequency},
         {"ci", {r.ci.lo, r.ci.hi}},
         {"z", r.z},
         {"n_times_p", r.scaled()},
         {"n_times_p_ci", {r.scaled_ci().lo, r.scaled_ci().hi}},
         {"exact", r.exact ? nlohmann::json(r.exact->str()) : nlohmann::json(nullptr)},
         {"strata", strata},
         {"by_lag", rows_json(to_rows(r.by_lag, r.total, r.z), "lag")},
         {"by_rank", rows_json(to_rows(r.by_rank, r.total, r.z), "rank")},
         {"seed", r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr)},
         {"prng", r.prng},
         {"cap", r.cap},
         {"threads", r.threads},
         {"version", kVersion},
         {"runtime_seconds", r.runtime_seconds}};
}

void to_json(nlohmann::json& j, const AsymptoticConstant& c) {
    j = {{"c", c.c ? nlohmann::json(*c.c) : nlohmann::json(nullptr)},
         {"leading_order", c.leading_order},
         {"derived", true},
         {"derivation", c.derivation}};
}

void to_json(nlohmann::json& j, const LagTable& t) {
    j = {{"n", t.n},
         {"tau", t.tau},
         {"sigma", t.sigma},
         {"mode", t.exhaustive ? "exhaustive" : "monte_carlo"},
         {"by_lag", rows_json(t.by_lag, "lag")},
         {"by_rank", rows_json(t.by_rank, "rank")}};
}

void to_json(nlohmann::json& j, const ConjectureScan& s) {
    auto counter = nlohmann::json::array();
    for (const auto& rec : s.counterexamples) counter.push_back(record_json(rec));
    auto records = nlohmann::json::array();
    for (const auto& rec : s.records) records.push_back(record_json(rec));
    j = {{"n", s.n},
         {"tau_max", s.tau_max},
         {"sigma_max", s.sigma_max},
         {"mode", s.exhaustive ? "exhaustive" : "monte_carlo"},
         {"rules", s.rules},
         {"tiles", s.tiles},
         {"semi_simple", s.semi_simple},
         {"tau2", {{"tiles", s.tau2_tiles}, {"holding", s.tau2_holding}}},
         {"sigma2", {{"tiles", s.sigma2_tiles}, {"holding", s.sigma2_holding}}},
         {"counterexamples", counter},
         {"records", records}};
}

}  // namespace wrps

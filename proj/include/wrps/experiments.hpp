#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wrps/label_graph.hpp"
#include "wrps/numeric.hpp"
#include "wrps/rule.hpp"
#include "wrps/tile.hpp"

namespace wrps {

inline constexpr std::string_view kVersion = "0.1.0";

/// Finite set of (tau, sigma) period pairs.
class PeriodSet {
public:
    /// Throws std::invalid_argument when empty or when an entry is below 1.
    explicit PeriodSet(std::vector<std::pair<int, int>> pairs);

    /// Parses "1x1,2x2" (also accepts ':' or '/' between tau and sigma).
    static PeriodSet parse(std::string_view text);

    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
    bool contains(int tau, int sigma) const;
    std::string str() const;

private:
    std::vector<std::pair<int, int>> pairs_;  // sorted, unique
};

/// Every PS and WRPS of a rule whose (tau, sigma) lies in the period set.
struct RuleAnalysis {
    std::vector<CycleRecord> ps;
    std::vector<CycleRecord> wrps;
};

RuleAnalysis analyze_periods(const Rule& rule, const PeriodSet& periods, bool wrps_only = false,
                             std::uint64_t node_cap = kDefaultNodeCap);

/// One WRPS with periods in the set, or nullopt. Stops at the first hit.
std::optional<CycleRecord> exists_wrps(const Rule& rule, const PeriodSet& periods,
                                       std::uint64_t node_cap = kDefaultNodeCap);

struct StratumKey {
    int tau = 0;
    int sigma = 0;
    int lag = 0;
    int rank = 0;

    friend auto operator<=>(const StratumKey&, const StratumKey&) = default;
};

/// Numbers of rules having at least one PS / WRPS in a stratum.
struct StratumCount {
    std::uint64_t ps_rules = 0;
    std::uint64_t wrps_rules = 0;
};

struct ExperimentReport {
    int n = 0;
    std::vector<std::pair<int, int>> periods;
    bool exhaustive = false;
    std::uint64_t total = 0;  ///< rules enumerated or sampled
    std::uint64_t ps_rules = 0;
    std::uint64_t wrps_rules = 0;
    std::map<StratumKey, StratumCount> strata;
    std::map<int, StratumCount> by_lag;
    std::map<int, StratumCount> by_rank;
    double frequency = 0.0;  ///< wrps_rules / total
    Interval ci;             ///< Wilson interval of the frequency
    double z = 1.96;
    std::optional<Fraction> exact;  ///< exhaustive runs only
    std::optional<std::uint64_t> seed;
    std::string prng;
    std::uint64_t cap = 0;
    unsigned threads = 1;
    double runtime_seconds = 0.0;

    double scaled() const { return n * frequency; }
    Interval scaled_ci() const { return {n * ci.lo, n * ci.hi}; }
};

/// Hardware concurrency, at least 1.
unsigned default_threads();

/// Splits [0, count) into contiguous chunks, one per worker; `body(worker,
/// begin, end)`. Rethrows the first worker exception.
void parallel_for(std::uint64_t count, unsigned threads,
                  const std::function<void(unsigned, std::uint64_t, std::uint64_t)>& body);

/// Exact census over all n^(n^2) rules. Throws std::length_error over `cap`.
ExperimentReport exhaustive_probability(int n, const PeriodSet& periods, unsigned threads = 0,
                                        std::uint64_t cap = kDefaultRuleCap, double z = 1.96);

/// Sample k uses random_rule(n, stream_seed(seed, k)), so results do not
/// depend on the thread count. Throws std::invalid_argument when samples = 0.
ExperimentReport monte_carlo_probability(int n, const PeriodSet& periods, std::uint64_t samples,
                                         std::uint64_t seed, unsigned threads = 0, double z = 1.96);

struct AsymptoticConstant {
    /// Sum of phi(sigma) over pairs with sigma | tau; unset when there is none.
    std::optional<std::uint64_t> c;
    /// Leading order x of P ~ 1/n^x: min sigma / gcd(tau, sigma).
    int leading_order = 1;
    std::string derivation;
};

AsymptoticConstant asymptotic_constant(const PeriodSet& periods);

struct StratumRow {
    int key = 0;
    std::uint64_t wrps_rules = 0;
    std::uint64_t ps_rules = 0;
    std::uint64_t total = 0;
    double frequency = 0.0;
    Interval ci;
};

struct LagTable {
    int n = 0;
    int tau = 0;
    int sigma = 0;
    bool exhaustive = false;
    std::vector<StratumRow> by_lag;
    std::vector<StratumRow> by_rank;
};

/// WRPS existence frequencies per lag and per rank for one (tau, sigma).
/// Exhaustive when `samples` is unset.
LagTable lag_stratified_expectation(int n, int tau, int sigma, std::optional<std::uint64_t> samples,
                                    std::uint64_t seed, unsigned threads = 0, double z = 1.96);

struct ConjectureRecord {
    Tile tile;
    RankConjectureCheck check;
};

struct ConjectureScan {
    int n = 0;
    int tau_max = 0;
    int sigma_max = 0;
    bool exhaustive = false;
    std::uint64_t rules = 0;
    std::uint64_t tiles = 0;  ///< distinct canonical WRPS tiles
    std::uint64_t semi_simple = 0;
    std::uint64_t tau2_tiles = 0;
    std::uint64_t tau2_holding = 0;
    std::uint64_t sigma2_tiles = 0;
    std::uint64_t sigma2_holding = 0;
    std::vector<ConjectureRecord> counterexamples;
    std::vector<ConjectureRecord> records;  ///< every scanned tile, canonical order
};

/// Runs check_rank_conjecture on every distinct WRPS tile with tau <= tau_max,
/// sigma <= sigma_max over all rules (or `samples` random ones).
ConjectureScan conjecture_scan(int n, int tau_max, int sigma_max, std::optional<std::uint64_t> samples,
                               std::uint64_t seed, unsigned threads = 0);

/// CSV with header n,tau,sigma,lag,rank,count,total,freq,ci_lo,ci_hi,seed.
/// One row per stratum (count = WRPS rules) and an aggregate row whose
/// stratum fields are "*".
std::string report_csv(const ExperimentReport& report);

void to_json(nlohmann::json& j, const ExperimentReport& report);
void to_json(nlohmann::json& j, const AsymptoticConstant& constant);
void to_json(nlohmann::json& j, const LagTable& table);
void to_json(nlohmann::json& j, const ConjectureScan& scan);

}  // namespace wrps

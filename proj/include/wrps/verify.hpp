#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wrps {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;  ///< 0: all cores
};

// Individual checks. Each catches its own exceptions and reports them as failures.

/// Rule 102222210 has a tau = 3, sigma = 6 WRPS equal to the worked tile.
CheckResult check_worked_example();
/// count_D_exhaustive matches the closed form at (n, tau) in {(2,1),(3,1),(4,1),(2,2),(3,2)}.
CheckResult check_lad_counts();
/// Monte Carlo P(A => B) at n = 4, A = 01, B = 00 within 4 sigma of 7/256.
CheckResult check_deciding_probability(const VerifyOptions& options, std::uint64_t samples = 1'000'000);
/// Exhaustive simple-tile census against phi(d) C(n,s) (s-1)!.
CheckResult check_simple_census();
/// decides_by_simulation agrees with LAD membership.
CheckResult check_oracle_equivalence(const VerifyOptions& options, std::uint64_t samples = 100'000);
/// Every WRPS of the n = 3 census expands at speed >= 1/(tau n) against random perturbations.
CheckResult check_velocity_bound(const VerifyOptions& options, int perturbations = 20);
/// Nested sum S_m equals its closed form for n <= 5, m <= 4.
CheckResult check_identity();
/// n P for periods {1x1} levels off near 1 while {1x2} decays.
CheckResult check_asymptotic_trend(const VerifyOptions& options, std::uint64_t samples = 100'000);
/// No counterexample to rank >= x - lag among n = 3 WRPS tiles with tau, sigma <= 3.
CheckResult check_conjectures(const VerifyOptions& options);

/// P(A => B) for simple A counted over every rule, against the exact value.
CheckResult check_deciding_exact();
/// out_neighbors against a scan of all labels.
CheckResult check_arcs_brute_force(const VerifyOptions& options);
/// exists_wrps on periods {1x1} against a direct fixed-point scan, n = 2, 3.
CheckResult check_fixed_point_scan();
/// Monte Carlo with 50 x 16 samples at n = 2 against the exhaustive fraction.
CheckResult check_mc_consistency(const VerifyOptions& options);
/// A PS with a non-deciding arc stalls under its blocking perturbation.
CheckResult check_blocking(const VerifyOptions& options);

/// Suites: formulas, oracles, conjectures, dynamics, asymptotics, all.
/// Throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& options);

std::vector<std::string_view> suite_names();

}  // namespace wrps

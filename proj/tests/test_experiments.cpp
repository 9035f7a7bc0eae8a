#include <doctest.h>

#include "wrps/experiments.hpp"

using namespace wrps;

namespace {

bool robust_fixed_point(const Rule& f) {
    for (int a = 0; a < f.n(); ++a) {
        const auto s = static_cast<State>(a);
        if (f(s, s) != s) continue;
        bool all = true;
        for (int c0 = 0; c0 < f.n(); ++c0) {
            auto c = static_cast<State>(c0);
            for (int k = 0; k < f.n(); ++k) c = f(s, c);
            all = all && c == s;
        }
        if (all) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("period sets") {
    const PeriodSet p = PeriodSet::parse("2x2,1x1,2x2,3:1");
    CHECK(p.pairs().size() == 3);
    CHECK(p.contains(3, 1));
    CHECK_FALSE(p.contains(1, 3));
    CHECK(p.str() == "1x1,2x2,3x1");
    CHECK_THROWS_AS(PeriodSet::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(PeriodSet::parse("0x1"), std::invalid_argument);
    CHECK_THROWS_AS(PeriodSet::parse("2y2"), std::invalid_argument);
    CHECK_THROWS_AS(PeriodSet::parse("2x"), std::invalid_argument);
}

TEST_CASE("exists_wrps") {
    const Rule f = parse_rule("102222210", 3);
    const auto w = exists_wrps(f, PeriodSet({{3, 6}}));
    REQUIRE(w.has_value());
    CHECK(w->tile == canonical_tile(Tile(3, {{0, 2, 2, 2, 1, 1}, {2, 2, 1, 1, 0, 2}, {1, 1, 0, 2, 2, 2}})));
    const Rule zero = parse_rule("000000000", 3);
    CHECK_FALSE(exists_wrps(zero, PeriodSet({{2, 1}, {2, 2}, {2, 3}, {2, 4}})).has_value());
    CHECK(exists_wrps(zero, PeriodSet({{1, 1}})).has_value());
    enumerate_rules(2, [](const Rule& g) {
        CHECK(exists_wrps(g, PeriodSet({{1, 1}})).has_value() == robust_fixed_point(g));
    });
}

TEST_CASE("exhaustive probability against closed forms") {
    const auto r2 = exhaustive_probability(2, PeriodSet({{1, 1}}), 1);
    CHECK(r2.exact == Fraction(7, 16));
    CHECK(r2.total == 16);
    CHECK(r2.exhaustive);
    const auto r3 = exhaustive_probability(3, PeriodSet({{1, 1}}), 2);
    CHECK(r3.exact == Fraction(217, 729));
    CHECK(r3.scaled() == doctest::Approx(3.0 * 217 / 729));
    CHECK_THROWS_AS(exhaustive_probability(4, PeriodSet({{1, 1}})), std::length_error);
}

TEST_CASE("strata are consistent") {
    const auto r = exhaustive_probability(3, PeriodSet::parse("1x1,1x2,2x1,2x2"), 2);
    std::uint64_t max_stratum = 0;
    for (const auto& [k, c] : r.strata) {
        CHECK(c.wrps_rules <= c.ps_rules);
        CHECK(PeriodSet(r.periods).contains(k.tau, k.sigma));
        max_stratum = std::max(max_stratum, c.wrps_rules);
    }
    CHECK(r.wrps_rules >= max_stratum);
    CHECK(r.wrps_rules <= r.ps_rules);
    CHECK(r.frequency >= 0.0);
    CHECK(r.frequency <= 1.0);
}

TEST_CASE("Monte Carlo does not depend on the thread count") {
    const PeriodSet p = PeriodSet::parse("1x1,2x2");
    const auto a = monte_carlo_probability(4, p, 3000, 99, 1);
    const auto b = monte_carlo_probability(4, p, 3000, 99, 3);
    CHECK(a.wrps_rules == b.wrps_rules);
    CHECK(a.ps_rules == b.ps_rules);
    CHECK(a.strata.size() == b.strata.size());
    CHECK(a.seed == std::optional<std::uint64_t>(99));
    CHECK(a.prng == "splitmix64");
    CHECK_THROWS_AS(monte_carlo_probability(4, p, 0, 1), std::invalid_argument);
}

TEST_CASE("Monte Carlo converges to the exhaustive value at n = 3") {
    const PeriodSet p({{1, 1}});
    const auto mc = monte_carlo_probability(3, p, 19683 * 2, 5, 2);
    const double exact = 217.0 / 729;
    CHECK(mc.ci.lo <= exact + 0.005);
    CHECK(exact - 0.005 <= mc.ci.hi);
}

TEST_CASE("derived asymptotic constant") {
    CHECK(asymptotic_constant(PeriodSet::parse("1x1")).c == std::optional<std::uint64_t>(1));
    CHECK(asymptotic_constant(PeriodSet::parse("2x2")).c == std::optional<std::uint64_t>(1));
    CHECK(asymptotic_constant(PeriodSet::parse("5x1")).c == std::optional<std::uint64_t>(1));
    CHECK(asymptotic_constant(PeriodSet::parse("2x2,2x1")).c == std::optional<std::uint64_t>(2));
    CHECK(asymptotic_constant(PeriodSet::parse("6x3")).c == std::optional<std::uint64_t>(2));
    const auto none = asymptotic_constant(PeriodSet::parse("1x2,2x3"));
    CHECK_FALSE(none.c.has_value());
    CHECK(none.leading_order == 2);
}

TEST_CASE("lag table") {
    const auto t = lag_stratified_expectation(3, 2, 1, std::nullopt, 0, 2);
    CHECK(t.exhaustive);
    REQUIRE_FALSE(t.by_lag.empty());
    for (const auto& row : t.by_lag) {
        CHECK(row.total == 19683);
        CHECK(row.wrps_rules <= row.ps_rules);
    }
    CHECK(t.by_lag.front().key == 0);
    const auto mc = lag_stratified_expectation(4, 2, 2, 2000, 3, 1);
    CHECK_FALSE(mc.exhaustive);
}

TEST_CASE("conjecture scan") {
    const auto s = conjecture_scan(2, 2, 3, std::nullopt, 0, 1);
    CHECK(s.rules == 16);
    CHECK(s.tiles == s.records.size());
    CHECK(s.counterexamples.empty());
    CHECK(s.tau2_holding == s.tau2_tiles);
    CHECK(s.sigma2_holding == s.sigma2_tiles);
}

TEST_CASE("csv report") {
    const auto r = monte_carlo_probability(3, PeriodSet({{1, 1}}), 500, 12, 1);
    const std::string csv = report_csv(r);
    CHECK(csv.rfind("n,tau,sigma,lag,rank,count,total,freq,ci_lo,ci_hi,seed\n", 0) == 0);
    CHECK(csv.find("3,*,*,*,*," + std::to_string(r.wrps_rules) + ",500,") != std::string::npos);
    CHECK(csv.find(",12\n") != std::string::npos);
    nlohmann::json j = r;
    CHECK(j["mode"] == "monte_carlo");
    CHECK(j["seed"] == 12);
}

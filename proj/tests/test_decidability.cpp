#include <doctest.h>

#include "wrps/decidability.hpp"
#include "wrps/rng.hpp"

using namespace wrps;

namespace {

// The two LADs of A = 12 over three states: row a = 0 of f is irrelevant.
Rule lad_rule(int f11) {
    return Rule::from_function(3, [f11](int a, int b) {
        if (a == 1) return b == 1 ? f11 : b;
        if (a == 2) return b == 0 ? 0 : 3 - b;
        return 0;
    });
}

}  // namespace

TEST_CASE("LAD membership on the two three-state examples") {
    const Label a{1, 2};
    const Label b{0, 0};
    const Rule left = lad_rule(1);
    CHECK(in_E(build_lad(left, a), b));
    CHECK_FALSE(in_D(build_lad(left, a), b));
    CHECK_FALSE(decides_by_simulation(left, a, b));
    const Rule right = lad_rule(0);
    CHECK(in_D(build_lad(right, a), b));
    CHECK(decides_by_simulation(right, a, b));
}

TEST_CASE("LAD arcs follow the rule") {
    const Rule f = random_rule(4, 9);
    const Label a{3, 0, 2};
    const Lad lad = build_lad(f, a);
    CHECK(lad.node_count() == 12);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) CHECK(lad.target(i, static_cast<State>(j)) == f(a[i], static_cast<State>(j)));
    CHECK_THROWS_AS(in_E(lad, Label{0, 0}), std::invalid_argument);
}

TEST_CASE("count of deciding LADs") {
    CHECK(count_D_formula(3, 2) == 45);
    CHECK(count_D_formula(2, 1) == 1);
    CHECK(count_D_formula(4, 1) == 16);
    for (auto [n, tau] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {4, 1}, {2, 2}, {3, 2}, {2, 3}}) {
        const auto c = count_D_exhaustive(n, tau);
        CHECK(c.match);
        CHECK(c.total == ipow(static_cast<std::uint64_t>(n), static_cast<unsigned>(n * tau)));
    }
    CHECK_THROWS_AS(count_D_exhaustive(4, 3, 1000), std::length_error);
}

TEST_CASE("deciding probability for simple labels") {
    const auto p = p_decides_simple(4, 2);
    CHECK(p.joint == Fraction(7, 256));
    CHECK(p.conditional == Fraction(7, 16));
    CHECK(p_decides_simple(3, 2).joint == Fraction(5, 81));
    CHECK_THROWS_AS(p_decides_simple(2, 3), std::invalid_argument);
}

TEST_CASE("combinatorial identity") {
    const auto v = combinatorial_identity_S(3, 1, 0);
    CHECK(v.direct == 45);
    CHECK(v.closed == 45);
    for (int n = 2; n <= 5; ++n)
        for (int m = 1; m <= 4; ++m)
            for (int k = 0; k < n; ++k) {
                const auto w = combinatorial_identity_S(n, m, k);
                CHECK(w.direct == w.closed);
            }
    CHECK_THROWS_AS(combinatorial_identity_S(3, 1, 3), std::invalid_argument);
}

TEST_CASE("simulation and LAD agree on random triples") {
    SplitMix64 rng(41);
    for (int k = 0; k < 20000; ++k) {
        const int n = 2 + static_cast<int>(rng.below(4));
        const int tau = 1 + static_cast<int>(rng.below(4));
        const Rule f = random_rule(n, rng);
        Label a(static_cast<std::size_t>(tau)), b(static_cast<std::size_t>(tau));
        for (auto& v : a) v = static_cast<State>(rng.below(static_cast<std::uint64_t>(n)));
        for (auto& v : b) v = static_cast<State>(rng.below(static_cast<std::uint64_t>(n)));
        if (rng.below(2) == 0) {
            const auto nb = out_neighbors(f, a);
            if (!nb.empty()) b = nb[rng.below(nb.size())];
        }
        CHECK(decides_by_simulation(f, a, b) == in_D(build_lad(f, a), b));
    }
}

TEST_CASE("conditional deciding probability for a non-simple label") {
    const Label a{0, 0, 1};
    const Label b{0, 1, 2};
    const std::vector<int> ns{3, 5, 8};
    const auto rows = decay_of_nonsimple_conditional(ns, a, b, 4000, 5);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.samples == 4000);
        CHECK(r.ci.lo <= r.estimate);
        CHECK(r.estimate <= r.ci.hi);
    }
    CHECK(rows.front().estimate > rows.back().estimate);
    CHECK(decay_of_nonsimple_conditional(ns, a, b, 0, 5).empty());
    const auto again = decay_of_nonsimple_conditional(ns, a, b, 4000, 5);
    CHECK(again[1].decided == rows[1].decided);
    CHECK_THROWS_AS(decay_of_nonsimple_conditional(ns, Label{0, 0, 0}, Label{0, 0, 1}, 10, 5),
                    std::invalid_argument);
}

#include <doctest.h>

#include <set>

#include "wrps/rng.hpp"
#include "wrps/tile.hpp"

using namespace wrps;

namespace {

Tile worked_tile() { return Tile(3, {{0, 2, 2, 2, 1, 1}, {2, 2, 1, 1, 0, 2}, {1, 1, 0, 2, 2, 2}}); }

Tile rotate(const Tile& t, int di, int dj) {
    std::vector<Word> rows;
    for (int i = 0; i < t.tau(); ++i) {
        Word r;
        for (int j = 0; j < t.sigma(); ++j) r.push_back(t.at(i + di, j + dj));
        rows.push_back(r);
    }
    return Tile(t.n(), rows);
}

}  // namespace

TEST_CASE("the worked tile is a valid PS tile") {
    const Tile t = worked_tile();
    const auto report = validate_ps_tile(t);
    CHECK(report.valid);
    CHECK(report.violations.empty());
    const auto st = tile_stats(t);
    CHECK(st.s == 3);
    CHECK(st.p == 5);
    CHECK(st.lag == 2);
    CHECK(st.rank == 1);
    CHECK_FALSE(is_simple(t));
}

TEST_CASE("validation names each kind of violation") {
    // Periodic row.
    CHECK_FALSE(validate_ps_tile(Tile(2, {{0, 1, 0, 1}})).valid);
    // Pair (0,1) sent to two different states.
    CHECK_FALSE(validate_ps_tile(Tile(2, {{0, 1, 1}, {0, 1, 0}})).valid);
    // Temporal period shorter than tau.
    CHECK_FALSE(validate_ps_tile(Tile(2, {{0, 1}, {0, 1}})).valid);
    CHECK(validate_ps_tile(Tile(2, {{0, 1}, {1, 0}})).valid);
}

TEST_CASE("minimal period") {
    CHECK(minimal_period(Word{0, 1, 0, 1}) == 2);
    CHECK(minimal_period(Word{0, 0, 0}) == 1);
    CHECK(minimal_period(Word{0, 1, 1}) == 3);
    CHECK(is_aperiodic(Word{2}));
}

TEST_CASE("canonical form is invariant under joint rotation") {
    const Tile t = worked_tile();
    const Tile c = canonical_tile(t);
    for (int di = 0; di < 3; ++di)
        for (int dj = 0; dj < 6; ++dj) CHECK(canonical_tile(rotate(t, di, dj)) == c);
    CHECK(c <= t);
}

TEST_CASE("circular shifts") {
    CHECK(apply_shift(Word{0, 1, 2}, 1) == Word{1, 2, 0});
    CHECK(apply_shift(Word{0, 1, 2}, -1) == Word{2, 0, 1});
    CHECK(shift_order(6, 2) == 3);
    CHECK(shift_order(6, 0) == 1);
    CHECK(shift_order(5, 3) == 5);
    CHECK(shift_offset(Word{0, 1, 2}, Word{2, 0, 1}) == 2);
    CHECK_FALSE(shift_offset(Word{0, 1, 2}, Word{0, 2, 1}).has_value());
    for (const auto& b : shift_preimages(Word{0, 1, 0, 1}, 2)) {
        bool some = false;
        for (int k = 0; k < 4; ++k) some = some || (shift_order(4, k) == 2 && apply_shift(b, k) == Word{0, 1, 0, 1});
        CHECK(some);
    }
}

TEST_CASE("simple tile structure") {
    const Tile t(2, {{0, 1}, {1, 0}});
    REQUIRE(is_simple(t));
    const auto st = simple_structure(t);
    CHECK(st.d == 2);
    CHECK(st.row_shift.order == 2);
    CHECK(st.column_shift.order == 2);
    CHECK_THROWS_AS(simple_structure(worked_tile()), std::invalid_argument);
}

TEST_CASE("simple tile counts") {
    CHECK(count_simple_tiles(3, 1, 1, 1) == 3);
    CHECK(count_simple_tiles(4, 2, 2, 2) == 6);
    CHECK(count_simple_tiles(4, 2, 2, 4) == 6);
    CHECK(count_simple_tiles(4, 2, 1, 2) == 6);
    CHECK(count_simple_tiles(5, 2, 2, 4) == 30);
    CHECK(count_simple_tiles(5, 2, 2, 2) == 10);
    CHECK(count_simple_tiles(3, 2, 2, 4) == 0);
    CHECK_THROWS_AS(count_simple_tiles(4, 2, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(count_simple_tiles(4, 2, 3, 3), std::invalid_argument);
}

TEST_CASE("enumeration of simple tiles agrees with the count") {
    std::map<int, std::set<Tile>> classes;
    std::uint64_t arrays = 0;
    enumerate_simple_tiles(4, 2, 2, [&](const Tile& t) {
        CHECK(is_simple(t));
        CHECK(validate_ps_tile(t).valid);
        classes[tile_stats(t).s].insert(canonical_tile(t));
        ++arrays;
    });
    CHECK(classes[2].size() == 6);
    CHECK(classes[4].size() == 6);
    CHECK(arrays == 6 * 2 + 6 * 4);
    CHECK_THROWS_AS(enumerate_simple_tiles(5, 3, 3, [](const Tile&) {}, 1000), std::length_error);
}

TEST_CASE("fast rank agrees with branch and bound on random tiles") {
    SplitMix64 rng(3);
    for (int k = 0; k < 300; ++k) {
        const int tau = 1 + static_cast<int>(rng.below(4));
        const int sigma = 1 + static_cast<int>(rng.below(6));
        const int n = 2 + static_cast<int>(rng.below(7));
        std::vector<State> cells(static_cast<std::size_t>(tau * sigma));
        for (auto& c : cells) c = static_cast<State>(rng.below(static_cast<std::uint64_t>(n)));
        const Tile t(n, tau, sigma, cells);
        CHECK(tile_rank(t) == tile_rank_exact(t));
    }
}

TEST_CASE("shared-state break between simple tiles of one rule") {
    // f(0,0) = 0, f(0,1) = 0, f(1,0) = 1.
    const Tile fixed(2, {{0}});
    const Tile alternating(2, {{0, 1}, {1, 0}});
    const auto br = shared_state_break(fixed, alternating);
    REQUIRE(br.has_value());
    CHECK(fixed.at(br->i, br->j) == alternating.at(br->k, br->m));
    CHECK(fixed.at(br->i, br->j + 1) != alternating.at(br->k, br->m + 1));
    CHECK_FALSE(shared_state_break(Tile(3, {{0}}), Tile(3, {{1, 2}, {2, 1}})).has_value());
    CHECK_THROWS(shared_state_break(fixed, fixed));
}

TEST_CASE("rank conjecture on the worked tile") {
    const auto c = check_rank_conjecture(worked_tile());
    CHECK(c.x == 2);
    CHECK(c.lag == 2);
    CHECK(c.bound == 0);
    CHECK(c.holds);
    CHECK(c.index_set.empty());
    const auto s = check_rank_conjecture(Tile(2, {{0, 1}, {1, 0}}));
    CHECK(s.x == 1);
    CHECK(s.holds);
    CHECK(s.index_set.size() == 1);
}

TEST_CASE("text and json round-trip") {
    const Tile t = worked_tile();
    CHECK(parse_tile_text(format_tile_text(t)) == t);
    nlohmann::json j = t;
    CHECK(tile_from_json(j) == t);
    CHECK_THROWS(parse_tile_text("2 2 2\n0 1\n"));
}

#include <doctest.h>

#include <set>

#include "wrps/decidability.hpp"
#include "wrps/label_graph.hpp"
#include "wrps/rng.hpp"

using namespace wrps;

namespace {

// Every tau x sigma array that is a PS tile of f, up to rotation.
std::set<Tile> brute_force_ps(const Rule& f, int tau, int sigma) {
    std::set<Tile> out;
    const int n = f.n();
    const auto cells = static_cast<std::size_t>(tau * sigma);
    std::vector<State> a(cells, 0);
    for (;;) {
        const Tile t(n, tau, sigma, a);
        bool consistent = true;
        for (int i = 0; i < tau && consistent; ++i)
            for (int j = 0; j < sigma && consistent; ++j)
                consistent = t.at(i + 1, j + 1) == f(t.at(i, j), t.at(i, j + 1));
        if (consistent && validate_ps_tile(t).valid) out.insert(canonical_tile(t));
        std::size_t p = cells;
        while (p > 0 && ++a[p - 1] == n) a[--p] = 0;
        if (p == 0) return out;
    }
}

std::set<Tile> tiles_of(const std::vector<CycleRecord>& recs) {
    std::set<Tile> out;
    for (const auto& r : recs) out.insert(r.tile);
    return out;
}

}  // namespace

TEST_CASE("the worked rule has the worked WRPS") {
    const Rule f = parse_rule("102222210", 3);
    const Tile expected = canonical_tile(Tile(3, {{0, 2, 2, 2, 1, 1}, {2, 2, 1, 1, 0, 2}, {1, 1, 0, 2, 2, 2}}));
    SearchOptions opts;
    opts.sigma_max = 6;
    const auto wrps = find_wrps(f, 3, opts);
    REQUIRE(wrps.size() == 1);
    CHECK(wrps[0].tile == expected);
    CHECK(wrps[0].all_deciding());
    CHECK(tiles_of(find_ps(f, 3, opts)).contains(expected));
}

TEST_CASE("find_ps matches a brute-force scan of all arrays") {
    std::vector<Rule> rules;
    enumerate_rules(2, [&](const Rule& f) { rules.push_back(f); });
    for (std::uint64_t k = 0; k < 25; ++k) rules.push_back(random_rule(3, stream_seed(5, k)));
    for (const Rule& f : rules) {
        const int sigma_max = f.n() == 2 ? 4 : 3;
        for (int tau = 1; tau <= 2; ++tau) {
            SearchOptions opts;
            opts.sigma_max = sigma_max;
            std::set<Tile> brute;
            for (int sigma = 1; sigma <= sigma_max; ++sigma) brute.merge(brute_force_ps(f, tau, sigma));
            const auto found = find_ps(f, tau, opts);
            CHECK(tiles_of(found) == brute);
            CHECK(found.size() == brute.size());
        }
    }
}

TEST_CASE("WRPS are exactly the PS with every arc deciding and aperiodic columns") {
    for (std::uint64_t k = 0; k < 200; ++k) {
        const Rule f = random_rule(3, stream_seed(17, k));
        for (int tau = 1; tau <= 3; ++tau) {
            SearchOptions opts;
            opts.sigma_max = 3;
            std::set<Tile> expected;
            for (const auto& r : find_ps(f, tau, opts)) {
                bool columns = true;
                for (const auto& c : r.labels) columns = columns && is_aperiodic(c);
                if (r.all_deciding() && columns) expected.insert(r.tile);
            }
            CHECK(tiles_of(find_wrps(f, tau, opts)) == expected);
        }
    }
}

TEST_CASE("PS records are internally consistent") {
    const Rule f = random_rule(4, 77);
    SearchOptions opts;
    opts.sigma_max = 4;
    for (const auto& r : find_ps(f, 2, opts)) {
        CHECK(validate_ps_tile(r.tile).valid);
        CHECK(canonical_tile(r.tile) == r.tile);
        REQUIRE(r.labels.size() == static_cast<std::size_t>(r.tile.sigma()));
        for (std::size_t j = 0; j < r.labels.size(); ++j) {
            const auto& b = r.labels[(j + 1) % r.labels.size()];
            CHECK(right_extends(f, r.labels[j], b));
            CHECK(r.deciding[j] == in_D(build_lad(f, r.labels[j]), b));
        }
    }
}

TEST_CASE("constant rule: only the zero fixed point recurs") {
    const Rule zero = parse_rule("0000", 2);
    SearchOptions opts;
    opts.sigma_max = 4;
    const auto ps = find_ps(zero, 1, opts);
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].tile == Tile(2, {{0}}));
    for (int tau = 2; tau <= 3; ++tau) CHECK(find_wrps(zero, tau, opts).empty());
}

TEST_CASE("a label decides at most one successor") {
    for (std::uint64_t k = 0; k < 50; ++k) {
        const Rule f = random_rule(3, stream_seed(23, k));
        const LabelCodec codec({0, 1, 2}, 2, 3);
        for (std::uint64_t code = 0; code < codec.size(); ++code) {
            const Label a = codec.decode(code);
            int deciding = 0;
            for (const auto& b : out_neighbors(f, a)) deciding += in_D(build_lad(f, a), b) ? 1 : 0;
            CHECK(deciding <= 1);
            CHECK((deciding == 1) == decided_successor(f, a).has_value());
        }
    }
}

TEST_CASE("search limits") {
    const Rule f = random_rule(6, 1);
    SearchOptions opts;
    opts.sigma_max = 2;
    opts.node_cap = 100;
    CHECK_THROWS_AS(find_ps(f, 3, opts), std::length_error);
    opts.node_cap = kDefaultNodeCap;
    opts.alphabet = std::vector<State>{0, 1};
    for (const auto& r : find_ps(f, 3, opts))
        for (State v : r.tile.cells()) CHECK(v < 2);
    opts.sigma_max = 0;
    CHECK_THROWS_AS(find_ps(f, 1, opts), std::invalid_argument);
}

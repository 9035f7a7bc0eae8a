#include <doctest.h>

#include <set>

#include "wrps/rng.hpp"
#include "wrps/rule.hpp"

using namespace wrps;

TEST_CASE("rule names list f from (n-1,n-1) down to (0,0)") {
    const Rule f = parse_rule("102222210", 3);
    CHECK(f(2, 2) == 1);
    CHECK(f(2, 1) == 0);
    CHECK(f(2, 0) == 2);
    CHECK(f(1, 1) == 2);
    CHECK(f(0, 1) == 1);
    CHECK(f(0, 0) == 0);
    CHECK(format_rule(f) == "102222210");
}

TEST_CASE("bad rule names are rejected") {
    CHECK_THROWS_AS(parse_rule("10222221", 3), std::invalid_argument);
    CHECK_THROWS_AS(parse_rule("102222213", 3), std::invalid_argument);
    CHECK_THROWS_AS(parse_rule("10222221x", 3), std::invalid_argument);
    CHECK_THROWS_AS(parse_rule("0", 1), std::invalid_argument);
    CHECK_THROWS_AS(Rule(2, {0, 1, 2, 0}), std::invalid_argument);
}

TEST_CASE("comma names above ten states round-trip") {
    const Rule f = random_rule(12, 99);
    const std::string name = format_rule(f);
    CHECK(name.find(',') != std::string::npos);
    CHECK(parse_rule(name, 12) == f);
}

TEST_CASE("rule_at follows the lexicographic order of names") {
    CHECK(format_rule(rule_at(2, 0)) == "0000");
    CHECK(format_rule(rule_at(2, 5)) == "0101");
    CHECK(format_rule(rule_at(2, 15)) == "1111");
    CHECK(format_rule(rule_at(3, 19682)) == "222222222");
    CHECK_THROWS(rule_at(2, 16));
}

TEST_CASE("enumerate_rules visits every rule once, in order") {
    std::vector<std::string> names;
    enumerate_rules(2, [&](const Rule& f) { names.push_back(format_rule(f)); });
    REQUIRE(names.size() == 16);
    CHECK(std::set<std::string>(names.begin(), names.end()).size() == 16);
    CHECK(std::is_sorted(names.begin(), names.end()));
    CHECK(rule_count(3) == 19683);
    CHECK_THROWS_AS(enumerate_rules(3, [](const Rule&) {}, 1000), std::length_error);
}

TEST_CASE("splitmix64 matches its reference stream") {
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
    SplitMix64 other(0);
    CHECK(other.next() == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("bounded draws stay in range and are roughly uniform") {
    SplitMix64 rng(7);
    std::vector<int> hist(5, 0);
    for (int i = 0; i < 50000; ++i) {
        const auto v = rng.below(5);
        REQUIRE(v < 5);
        ++hist[v];
    }
    for (int h : hist) {
        CHECK(h > 9500);
        CHECK(h < 10500);
    }
    CHECK(stream_seed(1, 0) != stream_seed(1, 1));
    CHECK(stream_seed(1, 0) != stream_seed(2, 0));
}

TEST_CASE("random rules are reproducible from the seed") {
    CHECK(random_rule(4, 123) == random_rule(4, 123));
    CHECK_FALSE(random_rule(4, 123) == random_rule(4, 124));
    const Rule seven = random_rule(7, 5);
    for (State v : seven.table()) CHECK(v < 7);
}

TEST_CASE("rule json round-trip") {
    const Rule f = parse_rule("102222210", 3);
    nlohmann::json j = f;
    CHECK(j["n"] == 3);
    CHECK(rule_from_json(j) == f);
}

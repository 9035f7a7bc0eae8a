#include <doctest.h>

#include "wrps/dynamics.hpp"
#include "wrps/label_graph.hpp"
#include "wrps/rng.hpp"

using namespace wrps;

namespace {

const Rule& worked_rule() {
    static const Rule f = parse_rule("102222210", 3);
    return f;
}

Tile worked_tile() { return Tile(3, {{0, 2, 2, 2, 1, 1}, {2, 2, 1, 1, 0, 2}, {1, 1, 0, 2, 2, 2}}); }

Window periodic_window(const Tile& t, long offset, long width) {
    Window w;
    w.offset = offset;
    for (long x = offset; x < offset + width; ++x) w.cells.push_back(t.at(0, x));
    w.background = Background{t, 0};
    return w;
}

}  // namespace

TEST_CASE("evolving the worked row reproduces the tile") {
    const Tile t = worked_tile();
    const Window w = periodic_window(t, 0, 60);
    for (long steps = 1; steps <= 6; ++steps) {
        const Window e = evolve(worked_rule(), w, steps);
        CHECK(e.offset == steps);
        CHECK(e.time == steps);
        REQUIRE(e.cells.size() == static_cast<std::size_t>(60 - steps));
        for (long x = e.left(); x <= e.right(); ++x)
            CHECK(e.cells[static_cast<std::size_t>(x - e.offset)] == t.at(steps, x));
    }
    // Temporal period 3 and spatial period 6 are kept.
    const Window e = evolve(worked_rule(), w, 3);
    for (long x = e.left(); x + 6 <= e.right(); ++x)
        CHECK(e.cells[static_cast<std::size_t>(x - e.offset)] == e.cells[static_cast<std::size_t>(x + 6 - e.offset)]);
}

TEST_CASE("evolve basics") {
    const Rule zero = parse_rule("000000000", 3);
    Window w;
    w.cells = {2, 1, 0, 2, 2, 1};
    const Window z = evolve(zero, w, 1);
    for (State v : z.cells) CHECK(v == 0);
    const Rule f = random_rule(3, 8);
    Window r;
    SplitMix64 rng(4);
    for (int i = 0; i < 40; ++i) r.cells.push_back(static_cast<State>(rng.below(3)));
    CHECK(evolve(f, evolve(f, r, 5), 7).cells == evolve(f, r, 12).cells);
    CHECK(evolve(f, r, 0).cells == r.cells);
    CHECK_THROWS_AS(evolve(f, r, 40), std::length_error);
    CHECK_THROWS_AS(evolve(f, r, -1), std::invalid_argument);
}

TEST_CASE("frontier") {
    const Tile t = worked_tile();
    Window w = periodic_window(t, -10, 30);
    CHECK(frontier(w) == w.right());
    w.cells[15] = static_cast<State>((w.cells[15] + 1) % 3);
    CHECK(frontier(w) == 4);
    w.cells[0] = static_cast<State>((w.cells[0] + 1) % 3);
    CHECK_FALSE(frontier(w).has_value());
    w.background.reset();
    CHECK_THROWS_AS(frontier(w), std::invalid_argument);
}

TEST_CASE("metric") {
    Window a;
    a.offset = -5;
    a.cells.assign(11, 0);
    Window b = a;
    CHECK(metric(a, b) == 0.0);
    b.cells[5] = 1;
    CHECK(metric(a, b) == 1.0);
    b = a;
    b.cells[8] = 1;
    b.cells[9] = 1;
    CHECK(metric(a, b) == 0.125);
    b = a;
    b.offset = 20;
    CHECK_THROWS_AS(metric(a, b), std::invalid_argument);
}

TEST_CASE("the worked WRPS expands at speed at least 1/9") {
    const Tile t = worked_tile();
    for (auto p : {Perturbation::random(1), Perturbation::random(2), Perturbation::constant(0)}) {
        const auto est = measure_velocity(worked_rule(), t, p, 400);
        CHECK(est.trace.size() == 401);
        CHECK(est.v_hat >= 1.0 / 9);
        REQUIRE(est.certified_bound.has_value());
        CHECK(*est.certified_bound == doctest::Approx(1.0 / 9));
        CHECK(est.certificate_met);
        for (std::size_t k = 1; k < est.trace.size(); ++k) CHECK(est.trace[k] >= est.trace[k - 1]);
    }
    CHECK(default_horizon(worked_rule(), t) == 90);
}

TEST_CASE("velocity needs a PS of the rule") {
    CHECK_THROWS_AS(measure_velocity(parse_rule("000000000", 3), worked_tile(), Perturbation::random(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(measure_velocity(worked_rule(), worked_tile(), Perturbation::flip(-1, 0)), std::invalid_argument);
}

TEST_CASE("early-stopping certificate agrees with the full run") {
    int compared = 0;
    for (std::uint64_t k = 0; k < 300 && compared < 200; ++k) {
        const Rule f = random_rule(3, stream_seed(31, k));
        for (int tau = 1; tau <= 3; ++tau) {
            SearchOptions opts;
            opts.sigma_max = 3;
            for (const auto& r : find_wrps(f, tau, opts)) {
                const long horizon = 60L * tau * 3;
                const auto p = Perturbation::random(stream_seed(32, k));
                const auto full = measure_velocity(f, r.tile, p, horizon);
                const auto fast = certify_expansion(f, r.tile, p, horizon);
                CHECK(fast.deciding);
                CHECK(full.certificate_met == fast.met);
                const long at = fast.stopped_at;
                CHECK(full.trace[static_cast<std::size_t>(at)] >= std::min(fast.frontier, fast.target));
                ++compared;
            }
        }
    }
    CHECK(compared > 50);
}

TEST_CASE("a non-deciding arc yields a stalling perturbation") {
    int stalled = 0;
    for (std::uint64_t k = 0; k < 200; ++k) {
        const Rule f = random_rule(3, stream_seed(51, k));
        SearchOptions opts;
        opts.sigma_max = 3;
        for (const auto& r : find_ps(f, 2, opts)) {
            const auto block = blocking_perturbation(f, r.tile);
            CHECK(block.has_value() == !r.all_deciding());
            if (!block) continue;
            const auto est = measure_velocity(f, r.tile, *block, 100 * 6);
            CHECK(est.trace.back() < block->site);
            CHECK(est.v_hat == doctest::Approx(0.0).epsilon(0.01));
            ++stalled;
        }
    }
    CHECK(stalled > 0);
}

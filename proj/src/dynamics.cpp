#include "wrps/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wrps/decidability.hpp"
#include "wrps/label.hpp"
#include "wrps/rng.hpp"

namespace wrps {

namespace {

void require_ps_of(const Rule& rule, const Tile& tile) {
    if (tile.n() > rule.n()) {
        throw std::invalid_argument("tile uses more states than the rule");
    }
    if (!validate_ps_tile(tile).valid) {
        throw std::invalid_argument("tile is not a valid PS tile");
    }
    for (int j = 0; j < tile.sigma(); ++j) {
        if (!right_extends(rule, tile.column(j), tile.column(j + 1))) {
            throw std::invalid_argument("tile is not a PS of the rule: column " + std::to_string(j) +
                                        " does not right-extend to the next");
        }
    }
}

// Seed c_0 whose orbit never lands on B in phase, if A does not decide B.
std::optional<State> undecided_seed(const Rule& rule, const Label& a, const Label& b) {
    const std::size_t tau = a.size();
    const std::size_t steps = static_cast<std::size_t>(rule.n()) * tau + tau;
    for (int c0 = 0; c0 < rule.n(); ++c0) {
        auto c = static_cast<State>(c0);
        bool hit = false;
        for (std::size_t j = 0; j <= steps && !hit; ++j) {
            hit = c == b[j % tau];
            c = rule(a[j % tau], c);
        }
        if (!hit) {
            return static_cast<State>(c0);
        }
    }
    return std::nullopt;
}

}  // namespace

Window evolve(const Rule& rule, const Window& window, long steps) {
    if (steps < 0) {
        throw std::invalid_argument("evolve: negative step count");
    }
    if (steps >= static_cast<long>(window.cells.size())) {
        throw std::length_error("evolve: window of width " + std::to_string(window.cells.size()) +
                                " exhausted by " + std::to_string(steps) + " steps");
    }
    Window out = window;
    for (long t = 0; t < steps; ++t) {
        auto& c = out.cells;
        for (std::size_t x = 0; x + 1 < c.size(); ++x) {
            c[x] = rule(c[x], c[x + 1]);
        }
        c.pop_back();
        // Cell k now holds site offset + k + 1.
        ++out.offset;
        ++out.time;
    }
    return out;
}

std::optional<long> frontier(const Window& window) {
    if (!window.background) {
        throw std::invalid_argument("frontier: window has no background");
    }
    std::optional<long> last;
    for (std::size_t k = 0; k < window.cells.size(); ++k) {
        const long x = window.offset + static_cast<long>(k);
        if (window.cells[k] != window.background->at(window.time, x)) {
            break;
        }
        last = x;
    }
    return last;
}

double metric(const Window& x, const Window& y) {
    const long lo = std::max(x.left(), y.left());
    const long hi = std::min(x.right(), y.right());
    if (lo > hi) {
        throw std::invalid_argument("metric: windows share no sites");
    }
    long nearest = std::numeric_limits<long>::max();
    for (long s = lo; s <= hi; ++s) {
        if (x.cells[static_cast<std::size_t>(s - x.offset)] != y.cells[static_cast<std::size_t>(s - y.offset)]) {
            nearest = std::min(nearest, std::labs(s));
        }
    }
    if (nearest == std::numeric_limits<long>::max()) {
        return 0.0;
    }
    return std::ldexp(1.0, -static_cast<int>(std::min<long>(nearest, 2000)));
}

long default_horizon(const Rule& rule, const Tile& tile) { return 10L * tile.tau() * rule.n(); }

namespace {

// Agreement frontier of a proper configuration. Sites right of `right` never
// influence sites at or left of it, so values on [-1, right] stay exact
// without any right boundary; the frontier is capped at `right`.
class FrontierTracker {
public:
    FrontierTracker(const Rule& rule, const Tile& tile, const Perturbation& perturbation, long right)
        : rule_(rule), bg_{tile, 0}, right_(right), cells_(static_cast<std::size_t>(right + 2)) {
        if (perturbation.kind == Perturbation::Kind::single_flip && perturbation.site < 0) {
            throw std::invalid_argument("flip site must be >= 0");
        }
        if (perturbation.value >= rule.n()) {
            throw std::invalid_argument("perturbation state out of range");
        }
        SplitMix64 rng(perturbation.seed);
        for (long x = -1; x <= right_; ++x) {
            State v = bg_.at(0, x);
            if (x >= 0) {
                switch (perturbation.kind) {
                    case Perturbation::Kind::random:
                        v = static_cast<State>(rng.below(static_cast<std::uint64_t>(rule.n())));
                        break;
                    case Perturbation::Kind::constant:
                        v = perturbation.value;
                        break;
                    case Perturbation::Kind::single_flip:
                        if (x == perturbation.site) v = perturbation.value;
                        break;
                }
            }
            cell(x) = v;
        }
        advance();
    }

    long frontier() const { return s_; }
    long time() const { return t_; }

    void step() {
        // Sites <= s agree with the background and keep agreeing.
        cell(s_) = bg_.at(t_, s_);
        for (long x = right_; x > s_; --x) {
            cell(x) = rule_(cell(x - 1), cell(x));
        }
        ++t_;
        advance();
    }

private:
    State& cell(long x) { return cells_[static_cast<std::size_t>(x + 1)]; }

    void advance() {
        while (s_ < right_ && cell(s_ + 1) == bg_.at(t_, s_ + 1)) {
            ++s_;
        }
    }

    const Rule& rule_;
    Background bg_;
    long right_;
    std::vector<State> cells_;
    long s_ = -1;
    long t_ = 0;
};

bool all_arcs_deciding(const Rule& rule, const Tile& tile) {
    for (int j = 0; j < tile.sigma(); ++j) {
        if (!in_D(build_lad(rule, tile.column(j)), tile.column(j + 1))) return false;
    }
    return true;
}

}  // namespace

VelocityEstimate measure_velocity(const Rule& rule, const Tile& tile, const Perturbation& perturbation,
                                  long horizon) {
    require_ps_of(rule, tile);
    if (horizon <= 0) {
        horizon = default_horizon(rule, tile);
    }
    FrontierTracker tracker(rule, tile, perturbation, horizon + 64);
    VelocityEstimate est;
    est.horizon = horizon;
    est.trace.reserve(static_cast<std::size_t>(horizon) + 1);
    est.trace.push_back(tracker.frontier());
    for (long t = 0; t < horizon; ++t) {
        tracker.step();
        est.trace.push_back(tracker.frontier());
    }

    est.v_hat = std::numeric_limits<double>::infinity();
    for (long t = std::max<long>(1, horizon / 2); t <= horizon; ++t) {
        est.v_hat = std::min(est.v_hat, static_cast<double>(est.trace[static_cast<std::size_t>(t)]) / static_cast<double>(t));
    }
    if (all_arcs_deciding(rule, tile)) {
        const double tn = static_cast<double>(tile.tau()) * rule.n();
        est.certified_bound = 1.0 / tn;
        est.certificate_met = static_cast<double>(est.trace.back()) >= static_cast<double>(horizon) / tn - tn;
    }
    return est;
}

long certificate_target(const Rule& rule, const Tile& tile, long horizon) {
    const long tn = static_cast<long>(tile.tau()) * rule.n();
    // Smallest integer s with s >= horizon / tn - tn.
    const long q = horizon / tn + (horizon % tn != 0 ? 1 : 0);
    return q - tn;
}

CertificateRun certify_expansion(const Rule& rule, const Tile& tile, const Perturbation& perturbation,
                                 long horizon) {
    require_ps_of(rule, tile);
    if (horizon <= 0) {
        horizon = default_horizon(rule, tile);
    }
    CertificateRun run;
    run.horizon = horizon;
    run.target = certificate_target(rule, tile, horizon);
    run.deciding = all_arcs_deciding(rule, tile);
    FrontierTracker tracker(rule, tile, perturbation, std::max<long>(run.target, 0) + 1);
    while (tracker.frontier() < run.target && tracker.time() < horizon) {
        tracker.step();
    }
    run.stopped_at = tracker.time();
    run.frontier = tracker.frontier();
    run.met = run.frontier >= run.target;
    return run;
}

std::optional<Perturbation> blocking_perturbation(const Rule& rule, const Tile& tile) {
    require_ps_of(rule, tile);
    for (int j = 0; j < tile.sigma(); ++j) {
        if (auto c0 = undecided_seed(rule, tile.column(j), tile.column(j + 1))) {
            return Perturbation::flip(j + 1, *c0);
        }
    }
    return std::nullopt;
}

}  // namespace wrps

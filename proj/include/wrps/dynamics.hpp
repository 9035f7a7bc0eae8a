#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wrps/rule.hpp"
#include "wrps/tile.hpp"

namespace wrps {

// Update convention: eta_{t+1}(x) = f(eta_t(x-1), eta_t(x)). A column drives
// the column to its right, matching right-extension of labels.

/// Periodic space-time configuration xi_t(x) = tile(phase + t, x).
struct Background {
    Tile tile;
    int phase = 0;

    State at(long t, long x) const { return tile.at(phase + t, x); }
};

/// Finite piece of a configuration at time `time`, covering sites
/// [offset, offset + cells.size()).
struct Window {
    long offset = 0;
    long time = 0;
    std::vector<State> cells;
    std::optional<Background> background;

    long left() const { return offset; }
    long right() const { return offset + static_cast<long>(cells.size()) - 1; }
};

/// Advances `steps` time steps. Every step drops the leftmost site, whose
/// left neighbour is unknown, so every reported value is exact.
/// Throws std::length_error when steps >= the window width.
Window evolve(const Rule& rule, const Window& window, long steps);

/// Largest x in the window such that every site from the left edge to x
/// agrees with the background; nullopt when the leftmost site disagrees.
/// Throws std::invalid_argument when the window has no background.
std::optional<long> frontier(const Window& window);

/// 2^{-min |x|} over sites where the windows disagree (0 if none), on the
/// common index range. Throws std::invalid_argument if the ranges are disjoint.
double metric(const Window& x, const Window& y);

struct Perturbation {
    enum class Kind { random, constant, single_flip };

    Kind kind = Kind::random;
    std::uint64_t seed = 0;
    State value = 0;
    long site = 0;

    /// Uniform random states at every site x >= 0.
    static Perturbation random(std::uint64_t seed) { return {Kind::random, seed, 0, 0}; }
    /// State `value` at every site x >= 0.
    static Perturbation constant(State value) { return {Kind::constant, 0, value, 0}; }
    /// The periodic configuration with the single site `site` set to `value`.
    static Perturbation flip(long site, State value) { return {Kind::single_flip, 0, value, site}; }
};

struct VelocityEstimate {
    long horizon = 0;
    std::vector<long> trace;  ///< s_0 ... s_T
    double v_hat = 0.0;       ///< min of s_t / t over t >= T/2
    /// 1/(tau n) when every arc of the tile is deciding.
    std::optional<double> certified_bound;
    /// s_T >= T/(tau n) - tau n; only meaningful with a certified bound.
    bool certificate_met = false;
};

/// Default horizon: 10 * tau * n.
long default_horizon(const Rule& rule, const Tile& tile);

/// Runs the tile's PS against a proper initial configuration (periodic on
/// x < 0, perturbed on x >= 0) and records the agreement frontier s_t.
/// Throws std::invalid_argument when the tile is not a PS of the rule.
VelocityEstimate measure_velocity(const Rule& rule, const Tile& tile, const Perturbation& perturbation,
                                  long horizon = 0);

struct CertificateRun {
    long horizon = 0;
    long target = 0;      ///< smallest integer >= T/(tau n) - tau n
    bool deciding = false;  ///< every arc of the tile decides
    bool met = false;     ///< s_T >= target
    long stopped_at = 0;  ///< first t with s_t >= target, or the horizon
    long frontier = 0;    ///< s at stopped_at
};

/// Smallest integer >= horizon/(tau n) - tau n.
long certificate_target(const Rule& rule, const Tile& tile, long horizon);

/// Decides s_T >= T/(tau n) - tau n for one proper configuration. The
/// frontier never recedes, so the run stops as soon as it reaches the target
/// and only sites up to the target are simulated. Agrees with
/// measure_velocity(...).certificate_met on deciding tiles.
CertificateRun certify_expansion(const Rule& rule, const Tile& tile, const Perturbation& perturbation,
                                 long horizon = 0);

/// A single-site perturbation that stops the PS from expanding: the seed c_0
/// of a non-deciding arc A_j -> A_{j+1}, placed at site j+1 at time 0.
/// nullopt when every arc of the tile decides.
std::optional<Perturbation> blocking_perturbation(const Rule& rule, const Tile& tile);

}  // namespace wrps

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wrps/numeric.hpp"

namespace wrps {

using Word = std::vector<State>;

/// A tau x sigma array of states; row and column indices are taken modulo
/// tau and sigma. Row i is the configuration at time i, column j the
/// temporal word at site j.
class Tile {
public:
    /// `rows` must be rectangular and non-empty with every state below n.
    Tile(int n, std::vector<Word> rows);
    Tile(int n, int tau, int sigma, std::vector<State> cells);

    int n() const { return n_; }
    int tau() const { return tau_; }
    int sigma() const { return sigma_; }

    State at(long i, long j) const {
        const long r = ((i % tau_) + tau_) % tau_;
        const long c = ((j % sigma_) + sigma_) % sigma_;
        return cells_[static_cast<std::size_t>(r) * sigma_ + c];
    }

    std::span<const State> cells() const { return cells_; }
    std::span<const State> row(int i) const;
    Word column(int j) const;
    std::vector<Word> rows() const;
    std::vector<Word> columns() const;

    friend bool operator==(const Tile&, const Tile&) = default;
    friend auto operator<=>(const Tile&, const Tile&) = default;

private:
    int n_;
    int tau_;
    int sigma_;
    std::vector<State> cells_;
};

/// Smallest p > 0 with w[i] = w[i + p mod |w|] for all i.
int minimal_period(std::span<const State> word);
inline bool is_aperiodic(std::span<const State> word) {
    return minimal_period(word) == static_cast<int>(word.size());
}

struct TileReport {
    bool valid = true;
    std::vector<std::string> violations;
};

/// Checks uniqueness of assignment, aperiodic rows, and minimal temporal
/// period. Each violation names the witnessing indices.
TileReport validate_ps_tile(const Tile& tile);

struct TileStats {
    int p = 0;     ///< distinct horizontal pairs (a_{i,j}, a_{i,j+1})
    int s = 0;     ///< distinct states
    int lag = 0;   ///< p - s
    int rank = 0;  ///< most columns with pairwise disjoint, repeat-free states
};

TileStats tile_stats(const Tile& tile);

/// Rank by exhaustive branch and bound over column subsets.
int tile_rank_exact(const Tile& tile);
int tile_rank(const Tile& tile);

/// Circular shift by `offset`: (w_i, w_{i+1}, ..., w_{i-1}).
Word apply_shift(std::span<const State> word, long offset);

/// Order of the circular shift by `offset` on words of the given length.
int shift_order(int length, long offset);

/// Distinct words B with word = pi(B) for a shift pi of the given order.
std::vector<Word> shift_preimages(std::span<const State> word, int order);

/// Offset k with target = apply_shift(source, k), if any (smallest k).
std::optional<int> shift_offset(std::span<const State> source, std::span<const State> target);

/// Lexicographically smallest (row-major) joint rotation.
Tile canonical_tile(const Tile& tile);

bool is_simple(const Tile& tile);

struct CircularShiftInfo {
    int index = 0;   ///< first row (column) that is a shift of row (column) 0, or 0 if none
    int offset = 0;  ///< shift offset taking row_0 to that row
    int order = 1;   ///< order of the shift
};

struct SimpleStructure {
    CircularShiftInfo row_shift;
    CircularShiftInfo column_shift;
    int d = 1;
};

/// Row/column circular shifts of a simple PS tile and their common order d.
/// Throws std::invalid_argument if the tile is not a simple PS tile and
/// std::logic_error if the structural identities fail.
SimpleStructure simple_structure(const Tile& tile);

/// phi(d) * C(n, s) * (s - 1)! with d = tau*sigma/s: the number of simple PS
/// tiles with s states counted up to rotation. Throws std::invalid_argument
/// unless d is an integer dividing gcd(tau, sigma).
std::uint64_t count_simple_tiles(int n, int tau, int sigma, int s);

inline constexpr std::uint64_t kDefaultTileCap = 10'000'000;

/// Every tau x sigma array over Z_n that is a valid simple PS tile, each
/// exactly once (rotations are not merged). Throws std::length_error when
/// n^(tau*sigma) exceeds `cap`.
void enumerate_simple_tiles(int n, int tau, int sigma, const std::function<void(const Tile&)>& visit,
                            std::uint64_t cap = kDefaultTileCap);

struct StateBreak {
    int i = 0, j = 0;  ///< position in the first tile
    int k = 0, m = 0;  ///< position in the second tile
};

/// For two distinct simple tiles of a common rule: a pair of equal states
/// whose right neighbours differ, or nullopt if the tiles share no state.
std::optional<StateBreak> shared_state_break(const Tile& t1, const Tile& t2);

struct RankConjectureCheck {
    int rank = 0;
    int lag = 0;
    int x = 0;       ///< sigma / gcd(tau, sigma)
    int bound = 0;   ///< x - lag
    bool holds = false;
    int tau_tilde = 0;
    bool semi_simple = false;
    /// Leftmost (lexicographically first) x - lag pairwise disjoint repeat-free columns.
    std::vector<int> index_set;
};

RankConjectureCheck check_rank_conjecture(const Tile& tile);

/// "tau sigma n" header followed by tau lines of sigma integers.
std::string format_tile_text(const Tile& tile);
Tile parse_tile_text(std::string_view text);

void to_json(nlohmann::json& j, const Tile& tile);
Tile tile_from_json(const nlohmann::json& j);

}  // namespace wrps

#include "wrps/tile.hpp"

#include <algorithm>
#include <bitset>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wrps {

namespace {

using StateSet = std::bitset<kMaxStates>;

std::string pos(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

struct ColumnInfo {
    StateSet states;
    bool repeat_free = true;
};

std::vector<ColumnInfo> column_info(const Tile& tile) {
    std::vector<ColumnInfo> out(static_cast<std::size_t>(tile.sigma()));
    for (int j = 0; j < tile.sigma(); ++j) {
        auto& info = out[static_cast<std::size_t>(j)];
        for (int i = 0; i < tile.tau(); ++i) {
            const State v = tile.at(i, j);
            if (info.states.test(v)) {
                info.repeat_free = false;
            }
            info.states.set(v);
        }
    }
    return out;
}

// Packing of pairwise disjoint, repeat-free columns.
class ColumnPacking {
public:
    explicit ColumnPacking(std::vector<ColumnInfo> info) : info_(std::move(info)) {}

    int best() {
        best_ = 0;
        std::vector<int> current;
        search(0, StateSet{}, current);
        return best_;
    }

    // Lexicographically smallest index set of size `size`, if one exists.
    std::optional<std::vector<int>> first_of_size(int size) {
        std::vector<int> current;
        if (size <= 0) {
            return current;
        }
        if (find_first(0, StateSet{}, current, size)) {
            return current;
        }
        return std::nullopt;
    }

private:
    void search(std::size_t from, StateSet used, std::vector<int>& current) {
        best_ = std::max(best_, static_cast<int>(current.size()));
        if (static_cast<int>(current.size() + (info_.size() - from)) <= best_) {
            return;
        }
        for (std::size_t j = from; j < info_.size(); ++j) {
            const auto& c = info_[j];
            if (!c.repeat_free || (c.states & used).any()) {
                continue;
            }
            current.push_back(static_cast<int>(j));
            search(j + 1, used | c.states, current);
            current.pop_back();
            if (static_cast<int>(current.size() + (info_.size() - j)) <= best_) {
                return;
            }
        }
    }

    bool find_first(std::size_t from, StateSet used, std::vector<int>& current, int size) {
        if (static_cast<int>(current.size()) == size) {
            return true;
        }
        for (std::size_t j = from; j < info_.size(); ++j) {
            const auto& c = info_[j];
            if (!c.repeat_free || (c.states & used).any()) {
                continue;
            }
            current.push_back(static_cast<int>(j));
            if (find_first(j + 1, used | c.states, current, size)) {
                return true;
            }
            current.pop_back();
        }
        return false;
    }

    std::vector<ColumnInfo> info_;
    int best_ = 0;
};

// Columns are repeat-free and any two are either disjoint or on the same
// state set (the shape every simple tile has). Returns the class count.
std::optional<int> rank_from_classes(const std::vector<ColumnInfo>& info) {
    std::vector<StateSet> classes;
    for (const auto& c : info) {
        if (!c.repeat_free) {
            return std::nullopt;
        }
        bool placed = false;
        for (const auto& k : classes) {
            if (k == c.states) {
                placed = true;
                break;
            }
            if ((k & c.states).any()) {
                return std::nullopt;
            }
        }
        if (!placed) {
            classes.push_back(c.states);
        }
    }
    return static_cast<int>(classes.size());
}

std::vector<State> flatten(const std::vector<Word>& rows) {
    std::vector<State> cells;
    for (const auto& r : rows) {
        if (r.size() != rows.front().size()) {
            throw std::invalid_argument("tile rows must have equal length");
        }
        cells.insert(cells.end(), r.begin(), r.end());
    }
    return cells;
}

CircularShiftInfo first_shifted(const std::vector<Word>& words) {
    CircularShiftInfo info;
    const auto length = static_cast<int>(words.front().size());
    for (std::size_t i = 1; i < words.size(); ++i) {
        if (auto k = shift_offset(words.front(), words[i])) {
            info.index = static_cast<int>(i);
            info.offset = *k;
            info.order = shift_order(length, *k);
            return info;
        }
    }
    return info;
}

}  // namespace

Tile::Tile(int n, std::vector<Word> rows)
    : Tile(n, static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows.front().size()),
           flatten(rows)) {}

Tile::Tile(int n, int tau, int sigma, std::vector<State> cells)
    : n_(n), tau_(tau), sigma_(sigma), cells_(std::move(cells)) {
    if (n < 1 || n > kMaxStates) {
        throw std::invalid_argument("tile state count out of range");
    }
    if (tau < 1 || sigma < 1 || cells_.size() != static_cast<std::size_t>(tau) * sigma) {
        throw std::invalid_argument("tile dimensions do not match its cells");
    }
    for (State v : cells_) {
        if (v >= n) {
            throw std::invalid_argument("tile state " + std::to_string(v) + " not below n = " + std::to_string(n));
        }
    }
}

std::span<const State> Tile::row(int i) const {
    const int r = ((i % tau_) + tau_) % tau_;
    return std::span<const State>(cells_).subspan(static_cast<std::size_t>(r) * sigma_, sigma_);
}

Word Tile::column(int j) const {
    Word out(static_cast<std::size_t>(tau_));
    for (int i = 0; i < tau_; ++i) {
        out[static_cast<std::size_t>(i)] = at(i, j);
    }
    return out;
}

std::vector<Word> Tile::rows() const {
    std::vector<Word> out;
    for (int i = 0; i < tau_; ++i) {
        auto r = row(i);
        out.emplace_back(r.begin(), r.end());
    }
    return out;
}

std::vector<Word> Tile::columns() const {
    std::vector<Word> out;
    for (int j = 0; j < sigma_; ++j) {
        out.push_back(column(j));
    }
    return out;
}

int minimal_period(std::span<const State> word) {
    const auto len = static_cast<int>(word.size());
    for (int p = 1; p < len; ++p) {
        if (len % p != 0) {
            continue;
        }
        bool periodic = true;
        for (int i = 0; i + p < len && periodic; ++i) {
            periodic = word[static_cast<std::size_t>(i)] == word[static_cast<std::size_t>(i + p)];
        }
        if (periodic) {
            return p;
        }
    }
    return len;
}

TileReport validate_ps_tile(const Tile& tile) {
    TileReport report;
    auto fail = [&](std::string msg) {
        report.valid = false;
        report.violations.push_back(std::move(msg));
    };

    // Uniqueness of assignment: (a_{i,j}, a_{i,j+1}) determines a_{i+1,j+1}.
    std::map<std::pair<State, State>, std::pair<int, int>> seen;
    for (int i = 0; i < tile.tau(); ++i) {
        for (int j = 0; j < tile.sigma(); ++j) {
            const auto key = std::make_pair(tile.at(i, j), tile.at(i, j + 1));
            auto [it, inserted] = seen.emplace(key, std::make_pair(i, j));
            if (inserted) {
                continue;
            }
            const auto [k, m] = it->second;
            if (tile.at(i + 1, j + 1) != tile.at(k + 1, m + 1)) {
                fail("uniqueness of assignment: pair at " + pos(i, j) + " and " + pos(k, m) +
                     " assigns different successors");
            }
        }
    }
    for (int i = 0; i < tile.tau(); ++i) {
        const int p = minimal_period(tile.row(i));
        if (p != tile.sigma()) {
            fail("row " + std::to_string(i) + " is periodic with period " + std::to_string(p));
        }
    }
    for (int t = 1; t < tile.tau(); ++t) {
        if (std::ranges::equal(tile.row(t), tile.row(0))) {
            fail("temporal period reducible: row " + std::to_string(t) + " equals row 0");
            break;
        }
    }
    return report;
}

int tile_rank_exact(const Tile& tile) { return ColumnPacking(column_info(tile)).best(); }

int tile_rank(const Tile& tile) {
    auto info = column_info(tile);
    if (auto r = rank_from_classes(info)) {
        return *r;
    }
    return ColumnPacking(std::move(info)).best();
}

TileStats tile_stats(const Tile& tile) {
    std::set<std::pair<State, State>> pairs;
    StateSet states;
    for (int i = 0; i < tile.tau(); ++i) {
        for (int j = 0; j < tile.sigma(); ++j) {
            pairs.emplace(tile.at(i, j), tile.at(i, j + 1));
            states.set(tile.at(i, j));
        }
    }
    TileStats stats;
    stats.p = static_cast<int>(pairs.size());
    stats.s = static_cast<int>(states.count());
    stats.lag = stats.p - stats.s;
    stats.rank = tile_rank(tile);
    return stats;
}

Word apply_shift(std::span<const State> word, long offset) {
    const auto len = static_cast<long>(word.size());
    Word out(word.size());
    if (len == 0) {
        return out;
    }
    for (long j = 0; j < len; ++j) {
        out[static_cast<std::size_t>(j)] = word[static_cast<std::size_t>((((j + offset) % len) + len) % len)];
    }
    return out;
}

int shift_order(int length, long offset) {
    if (length < 1) {
        throw std::invalid_argument("shift on empty words");
    }
    const long k = ((offset % length) + length) % length;
    return length / static_cast<int>(std::gcd(static_cast<long>(length), k));
}

std::vector<Word> shift_preimages(std::span<const State> word, int order) {
    const auto len = static_cast<int>(word.size());
    std::set<Word> found;
    for (int k = 0; k < len; ++k) {
        if (shift_order(len, k) == order) {
            found.insert(apply_shift(word, -k));
        }
    }
    return {found.begin(), found.end()};
}

std::optional<int> shift_offset(std::span<const State> source, std::span<const State> target) {
    if (source.size() != target.size()) {
        return std::nullopt;
    }
    const auto len = static_cast<int>(source.size());
    for (int k = 0; k < len; ++k) {
        bool match = true;
        for (int j = 0; j < len && match; ++j) {
            match = target[static_cast<std::size_t>(j)] == source[static_cast<std::size_t>((j + k) % len)];
        }
        if (match) {
            return k;
        }
    }
    return std::nullopt;
}

Tile canonical_tile(const Tile& tile) {
    const int tau = tile.tau();
    const int sigma = tile.sigma();
    std::vector<State> best;
    std::vector<State> candidate(static_cast<std::size_t>(tau) * sigma);
    for (int r = 0; r < tau; ++r) {
        for (int c = 0; c < sigma; ++c) {
            for (int i = 0; i < tau; ++i) {
                for (int j = 0; j < sigma; ++j) {
                    candidate[static_cast<std::size_t>(i) * sigma + j] = tile.at(i + r, j + c);
                }
            }
            if (best.empty() || candidate < best) {
                best = candidate;
            }
        }
    }
    return Tile(tile.n(), tau, sigma, std::move(best));
}

bool is_simple(const Tile& tile) { return tile_stats(tile).lag == 0; }

SimpleStructure simple_structure(const Tile& tile) {
    if (!validate_ps_tile(tile).valid) {
        throw std::invalid_argument("simple_structure: not a PS tile");
    }
    const TileStats stats = tile_stats(tile);
    if (stats.lag != 0) {
        throw std::invalid_argument("simple_structure: tile has lag " + std::to_string(stats.lag));
    }
    SimpleStructure out;
    out.row_shift = first_shifted(tile.rows());
    out.column_shift = first_shifted(tile.columns());
    if (out.row_shift.order != out.column_shift.order) {
        throw std::logic_error("row and column shift orders differ");
    }
    out.d = out.row_shift.order;
    const int g = std::gcd(tile.tau(), tile.sigma());
    if (g % out.d != 0 || stats.s * out.d != tile.tau() * tile.sigma()) {
        throw std::logic_error("simple tile violates s = tau*sigma/d with d | gcd(tau, sigma)");
    }
    return out;
}

std::uint64_t count_simple_tiles(int n, int tau, int sigma, int s) {
    if (n < 1 || tau < 1 || sigma < 1 || s < 1) {
        throw std::invalid_argument("count_simple_tiles: arguments must be positive");
    }
    const int area = tau * sigma;
    if (area % s != 0) {
        throw std::invalid_argument("s must divide tau*sigma");
    }
    const int d = area / s;
    if (std::gcd(tau, sigma) % d != 0) {
        throw std::invalid_argument("d = tau*sigma/s must divide gcd(tau, sigma)");
    }
    const auto c = binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s));
    if (c == 0) {
        return 0;
    }
    return checked_mul(checked_mul(totient(static_cast<std::uint64_t>(d)), c),
                       factorial(static_cast<std::uint64_t>(s - 1)));
}

void enumerate_simple_tiles(int n, int tau, int sigma, const std::function<void(const Tile&)>& visit,
                            std::uint64_t cap) {
    if (tau < 1 || sigma < 1 || n < 1) {
        throw std::invalid_argument("enumerate_simple_tiles: arguments must be positive");
    }
    const auto cells = static_cast<unsigned>(tau * sigma);
    std::uint64_t total = 0;
    try {
        total = ipow(static_cast<std::uint64_t>(n), cells);
    } catch (const std::overflow_error&) {
        throw std::length_error("tile space exceeds the enumeration cap");
    }
    if (total > cap) {
        throw std::length_error("tile space n^(tau*sigma) = " + std::to_string(total) + " exceeds cap " +
                                std::to_string(cap));
    }
    std::vector<State> array(cells, 0);
    for (std::uint64_t k = 0; k < total; ++k) {
        Tile tile(n, tau, sigma, array);
        if (tile_stats(tile).lag == 0 && validate_ps_tile(tile).valid) {
            visit(tile);
        }
        for (std::size_t p = cells; p-- > 0;) {
            if (++array[p] < n) {
                break;
            }
            array[p] = 0;
        }
    }
}

std::optional<StateBreak> shared_state_break(const Tile& t1, const Tile& t2) {
    for (const Tile* t : {&t1, &t2}) {
        if (!validate_ps_tile(*t).valid || tile_stats(*t).lag != 0) {
            throw std::invalid_argument("shared_state_break: inputs must be simple PS tiles");
        }
    }
    if (t1.tau() == t2.tau() && t1.sigma() == t2.sigma() && canonical_tile(t1) == canonical_tile(t2)) {
        throw std::invalid_argument("shared_state_break: tiles are equal up to rotation");
    }
    // Common rule: every pair both tiles assign must map to the same successor.
    std::map<std::pair<State, State>, State> assigned;
    for (const Tile* t : {&t1, &t2}) {
        for (int i = 0; i < t->tau(); ++i) {
            for (int j = 0; j < t->sigma(); ++j) {
                const auto key = std::make_pair(t->at(i, j), t->at(i, j + 1));
                const State next = t->at(i + 1, j + 1);
                auto [it, inserted] = assigned.emplace(key, next);
                if (!inserted && it->second != next) {
                    throw std::invalid_argument("shared_state_break: tiles are not consistent with one rule");
                }
            }
        }
    }
    for (int i = 0; i < t1.tau(); ++i) {
        for (int j = 0; j < t1.sigma(); ++j) {
            for (int k = 0; k < t2.tau(); ++k) {
                for (int m = 0; m < t2.sigma(); ++m) {
                    if (t1.at(i, j) == t2.at(k, m) && t1.at(i, j + 1) != t2.at(k, m + 1)) {
                        return StateBreak{i, j, k, m};
                    }
                }
            }
        }
    }
    return std::nullopt;
}

RankConjectureCheck check_rank_conjecture(const Tile& tile) {
    RankConjectureCheck out;
    const TileStats stats = tile_stats(tile);
    out.rank = stats.rank;
    out.lag = stats.lag;
    out.x = tile.sigma() / std::gcd(tile.tau(), tile.sigma());
    out.bound = out.x - out.lag;
    out.holds = out.rank >= out.bound;

    out.tau_tilde = tile.tau();
    for (int t = 1; t < tile.tau(); ++t) {
        if (shift_offset(tile.row(0), tile.row(t))) {
            out.tau_tilde = t;
            break;
        }
    }
    out.semi_simple = stats.p == out.tau_tilde * tile.sigma();

    if (out.holds) {
        if (auto set = ColumnPacking(column_info(tile)).first_of_size(out.bound)) {
            out.index_set = std::move(*set);
        }
    }
    return out;
}

std::string format_tile_text(const Tile& tile) {
    std::ostringstream os;
    os << tile.tau() << ' ' << tile.sigma() << ' ' << tile.n() << '\n';
    for (int i = 0; i < tile.tau(); ++i) {
        for (int j = 0; j < tile.sigma(); ++j) {
            os << (j ? " " : "") << static_cast<int>(tile.at(i, j));
        }
        os << '\n';
    }
    return os.str();
}

Tile parse_tile_text(std::string_view text) {
    std::istringstream is{std::string(text)};
    int tau = 0, sigma = 0, n = 0;
    if (!(is >> tau >> sigma >> n)) {
        throw std::invalid_argument("tile text: expected header 'tau sigma n'");
    }
    if (tau < 1 || sigma < 1 || n < 1 || n > kMaxStates) {
        throw std::invalid_argument("tile text: invalid header");
    }
    std::vector<State> cells;
    for (long k = 0; k < static_cast<long>(tau) * sigma; ++k) {
        int v = 0;
        if (!(is >> v)) {
            throw std::invalid_argument("tile text: expected " + std::to_string(tau * sigma) + " cells");
        }
        if (v < 0 || v >= n) {
            throw std::invalid_argument("tile text: state out of range");
        }
        cells.push_back(static_cast<State>(v));
    }
    std::string rest;
    if (is >> rest) {
        throw std::invalid_argument("tile text: trailing data");
    }
    return Tile(n, tau, sigma, std::move(cells));
}

void to_json(nlohmann::json& j, const Tile& tile) {
    auto rows = nlohmann::json::array();
    for (int i = 0; i < tile.tau(); ++i) {
        std::vector<int> r(tile.row(i).begin(), tile.row(i).end());
        rows.push_back(r);
    }
    j = nlohmann::json{{"tau", tile.tau()}, {"sigma", tile.sigma()}, {"n", tile.n()}, {"cells", rows}};
}

Tile tile_from_json(const nlohmann::json& j) {
    const int n = j.at("n").get<int>();
    std::vector<Word> rows;
    for (const auto& r : j.at("cells")) {
        Word w;
        for (int v : r.get<std::vector<int>>()) {
            if (v < 0 || v >= n) {
                throw std::invalid_argument("tile json: state out of range");
            }
            w.push_back(static_cast<State>(v));
        }
        rows.push_back(std::move(w));
    }
    Tile tile(n, std::move(rows));
    if (tile.tau() != j.at("tau").get<int>() || tile.sigma() != j.at("sigma").get<int>()) {
        throw std::invalid_argument("tile json: tau/sigma do not match cells");
    }
    return tile;
}

}  // namespace wrps

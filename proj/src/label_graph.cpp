#include "wrps/label_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "wrps/decidability.hpp"

namespace wrps {

namespace {

LabelCodec make_codec(const Rule& rule, int tau, const SearchOptions& options) {
    if (tau < 1) {
        throw std::invalid_argument("temporal period must be positive");
    }
    if (options.sigma_max < 1) {
        throw std::invalid_argument("sigma_max must be positive");
    }
    std::vector<State> alphabet;
    if (options.alphabet) {
        alphabet = *options.alphabet;
    } else {
        alphabet.resize(static_cast<std::size_t>(rule.n()));
        std::iota(alphabet.begin(), alphabet.end(), State{0});
    }
    try {
        LabelCodec codec(std::move(alphabet), tau, rule.n());
        if (codec.size() > options.node_cap) {
            throw std::length_error("label digraph has " + std::to_string(codec.size()) +
                                    " nodes, above the node cap " + std::to_string(options.node_cap));
        }
        return codec;
    } catch (const std::overflow_error&) {
        throw std::length_error("label digraph exceeds the node cap");
    }
}

Tile tile_from_labels(int n, const std::vector<Label>& labels) {
    const int tau = static_cast<int>(labels.front().size());
    const int sigma = static_cast<int>(labels.size());
    std::vector<State> cells(static_cast<std::size_t>(tau) * sigma);
    for (int j = 0; j < sigma; ++j) {
        for (int i = 0; i < tau; ++i) {
            cells[static_cast<std::size_t>(i) * sigma + j] = labels[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        }
    }
    return Tile(n, tau, sigma, std::move(cells));
}

bool is_primitive(const std::vector<std::uint64_t>& walk) {
    const std::size_t len = walk.size();
    for (std::size_t p = 1; p < len; ++p) {
        if (len % p == 0 && std::equal(walk.begin() + static_cast<long>(p), walk.end(), walk.begin())) {
            return false;
        }
    }
    return true;
}

CycleRecord make_record(const Rule& rule, const Tile& canonical) {
    CycleRecord rec{canonical.columns(), {}, canonical, tile_stats(canonical)};
    const std::size_t sigma = rec.labels.size();
    for (std::size_t j = 0; j < sigma; ++j) {
        const auto& a = rec.labels[j];
        rec.deciding.push_back(in_D(build_lad(rule, a), rec.labels[(j + 1) % sigma]));
    }
    return rec;
}

class Collector {
public:
    Collector(const Rule& rule, const LabelCodec& codec, bool require_aperiodic_columns)
        : rule_(rule), codec_(codec), require_aperiodic_columns_(require_aperiodic_columns) {}

    void offer(const std::vector<std::uint64_t>& walk) {
        if (!is_primitive(walk)) {
            return;
        }
        std::vector<Label> labels;
        labels.reserve(walk.size());
        for (auto code : walk) {
            labels.push_back(codec_.decode(code));
        }
        if (require_aperiodic_columns_ &&
            !std::ranges::all_of(labels, [](const Label& l) { return is_aperiodic(l); })) {
            return;
        }
        const Tile tile = tile_from_labels(rule_.n(), labels);
        if (!validate_ps_tile(tile).valid) {
            return;
        }
        Tile canonical = canonical_tile(tile);
        if (!found_.contains(canonical)) {
            found_.emplace(canonical, make_record(rule_, canonical));
        }
    }

    std::vector<CycleRecord> take() {
        std::vector<CycleRecord> out;
        for (auto& [tile, rec] : found_) {
            out.push_back(std::move(rec));
        }
        std::ranges::stable_sort(out, {}, [](const CycleRecord& r) { return r.tile.sigma(); });
        return out;
    }

private:
    const Rule& rule_;
    const LabelCodec& codec_;
    bool require_aperiodic_columns_;
    std::map<Tile, CycleRecord> found_;
};

}  // namespace

bool CycleRecord::all_deciding() const {
    return std::ranges::all_of(deciding, [](bool d) { return d; });
}

std::vector<CycleRecord> find_ps(const Rule& rule, int tau, const SearchOptions& options) {
    const LabelCodec codec = make_codec(rule, tau, options);
    const std::uint64_t size = codec.size();

    std::vector<std::vector<std::uint64_t>> adjacency(size);
    for (std::uint64_t code = 0; code < size; ++code) {
        for (const auto& b : out_neighbors(rule, codec.decode(code))) {
            const std::uint64_t target = codec.encode(b);
            if (target < size) {
                adjacency[code].push_back(target);
            }
        }
        std::ranges::sort(adjacency[code]);
    }

    // Closed walks of length <= sigma_max rooted at their smallest label.
    // A rotation class is reached once per occurrence of its minimum; the
    // collector merges them by canonical tile.
    Collector collector(rule, codec, false);
    std::vector<std::uint64_t> path;
    struct Frame {
        std::uint64_t node;
        std::size_t next_edge;
    };
    std::vector<Frame> stack;
    for (std::uint64_t start = 0; start < size; ++start) {
        path.assign(1, start);
        stack.assign(1, Frame{start, 0});
        while (!stack.empty()) {
            Frame& top = stack.back();
            const auto& edges = adjacency[top.node];
            if (top.next_edge == edges.size()) {
                stack.pop_back();
                path.pop_back();
                continue;
            }
            const std::uint64_t next = edges[top.next_edge++];
            if (next < start) {
                continue;
            }
            if (next == start) {
                collector.offer(path);
            }
            if (static_cast<int>(path.size()) < options.sigma_max) {
                path.push_back(next);
                stack.push_back(Frame{next, 0});
            }
        }
    }
    return collector.take();
}

std::optional<Label> decided_successor(const Rule& rule, std::span<const State> a) {
    const Lad lad = build_lad(rule, a);
    for (auto& b : out_neighbors(rule, a)) {
        if (in_D(lad, b)) {
            return std::move(b);
        }
    }
    return std::nullopt;
}

std::vector<CycleRecord> find_wrps(const Rule& rule, int tau, const SearchOptions& options) {
    const LabelCodec codec = make_codec(rule, tau, options);
    const std::uint64_t size = codec.size();
    constexpr std::uint64_t kNone = UINT64_MAX;

    std::vector<std::uint64_t> successor(size, kNone);
    for (std::uint64_t code = 0; code < size; ++code) {
        if (auto b = decided_successor(rule, codec.decode(code))) {
            const std::uint64_t target = codec.encode(*b);
            if (target < size) {
                successor[code] = target;
            }
        }
    }

    // Rho detection: follow successors, colouring nodes by the walk that
    // first reached them; a repeat within the current walk closes a cycle.
    Collector collector(rule, codec, true);
    std::vector<std::uint64_t> owner(size, kNone);
    std::vector<std::uint64_t> trail;
    for (std::uint64_t start = 0; start < size; ++start) {
        if (owner[start] != kNone) {
            continue;
        }
        trail.clear();
        std::uint64_t v = start;
        while (v != kNone && owner[v] == kNone) {
            owner[v] = start;
            trail.push_back(v);
            v = successor[v];
        }
        if (v == kNone || owner[v] != start) {
            continue;
        }
        const auto first = std::ranges::find(trail, v);
        std::vector<std::uint64_t> cycle(first, trail.end());
        if (static_cast<int>(cycle.size()) <= options.sigma_max) {
            collector.offer(cycle);
        }
    }
    return collector.take();
}

void to_json(nlohmann::json& j, const CycleRecord& record) {
    auto labels = nlohmann::json::array();
    for (const auto& l : record.labels) {
        labels.push_back(std::vector<int>(l.begin(), l.end()));
    }
    j = nlohmann::json{{"labels", labels},
                       {"deciding", record.deciding},
                       {"tile", format_tile_text(record.tile)},
                       {"tau", record.tile.tau()},
                       {"sigma", record.tile.sigma()},
                       {"p", record.stats.p},
                       {"s", record.stats.s},
                       {"lag", record.stats.lag},
                       {"rank", record.stats.rank}};
}

}  // namespace wrps

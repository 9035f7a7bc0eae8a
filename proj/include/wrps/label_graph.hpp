#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "wrps/label.hpp"
#include "wrps/rule.hpp"
#include "wrps/tile.hpp"

namespace wrps {

inline constexpr std::uint64_t kDefaultNodeCap = 10'000'000;

struct SearchOptions {
    int sigma_max = 1;
    /// Upper bound on the number of labels the search may visit.
    std::uint64_t node_cap = kDefaultNodeCap;
    /// Restrict the digraph to labels over these states (all states when unset).
    std::optional<std::vector<State>> alphabet;
};

/// One periodic solution found as a closed walk A_0 -> ... -> A_{sigma-1} -> A_0.
/// Labels are the columns of `tile`, which is in canonical form.
struct CycleRecord {
    std::vector<Label> labels;
    std::vector<bool> deciding;  ///< deciding[j]: A_j => A_{j+1}
    Tile tile;
    TileStats stats;

    bool all_deciding() const;
};

/// All PS of temporal period exactly tau and spatial period <= sigma_max,
/// one record per rotation class, sorted by (sigma, tile).
/// Throws std::length_error when the label space exceeds the node cap.
std::vector<CycleRecord> find_ps(const Rule& rule, int tau, const SearchOptions& options);

/// All WRPS of temporal period exactly tau and spatial period <= sigma_max.
/// Walks only deciding arcs; since a label decides at most one successor the
/// deciding subgraph is functional and its cycles are found by rho detection.
std::vector<CycleRecord> find_wrps(const Rule& rule, int tau, const SearchOptions& options);

/// The unique B with A => B, if any.
std::optional<Label> decided_successor(const Rule& rule, std::span<const State> a);

void to_json(nlohmann::json& j, const CycleRecord& record);

}  // namespace wrps

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wrps/rule.hpp"
#include "wrps/tile.hpp"

namespace wrps {

/// A length-tau column word, read top to bottom; indices are taken mod tau.
using Label = Word;

/// A -> B: f(a_i, b_i) = b_{i+1 mod tau} for every i.
/// Throws std::invalid_argument when the lengths differ.
bool right_extends(const Rule& rule, std::span<const State> a, std::span<const State> b);

/// All B with A -> B. Each B is fixed by b_0, so at most n labels are
/// returned, ordered by b_0.
std::vector<Label> out_neighbors(const Rule& rule, std::span<const State> a);

/// Base-k positional code of labels over an alphabet of k states,
/// most significant position first.
class LabelCodec {
public:
    LabelCodec(std::vector<State> alphabet, int tau, int n);

    int tau() const { return tau_; }
    std::uint64_t size() const { return size_; }
    const std::vector<State>& alphabet() const { return alphabet_; }

    Label decode(std::uint64_t code) const;
    /// Returns size() when the label uses a state outside the alphabet.
    std::uint64_t encode(std::span<const State> label) const;

private:
    std::vector<State> alphabet_;
    std::vector<int> index_of_;
    int tau_;
    std::uint64_t size_;
};

}  // namespace wrps

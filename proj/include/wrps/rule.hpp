#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wrps/numeric.hpp"
#include "wrps/rng.hpp"

namespace wrps {

/// A 2-neighbor local rule f: Z_n x Z_n -> Z_n, stored densely at a*n + b.
class Rule {
public:
    /// `table` is indexed by a*n + b; throws std::invalid_argument on a bad table.
    Rule(int n, std::vector<State> table);

    /// Builds f from a callable g(a, b) -> state.
    static Rule from_function(int n, const std::function<int(int, int)>& g);

    int n() const { return n_; }
    State operator()(State a, State b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
    std::span<const State> table() const { return table_; }

    friend bool operator==(const Rule&, const Rule&) = default;

private:
    int n_;
    std::vector<State> table_;
};

/// Parses the conventional rule name: values listed for all pairs in reverse
/// lexicographic order, from (n-1, n-1) down to (0, 0). For n <= 10 the name
/// is a digit string; for n > 10 it is comma-separated decimal values.
Rule parse_rule(std::string_view name, int n);
std::string format_rule(const Rule& rule);

/// Table entries drawn in index order a*n + b, each uniform on Z_n.
Rule random_rule(int n, SplitMix64& rng);
Rule random_rule(int n, std::uint64_t seed);

/// Number of n-state rules, n^(n^2); throws std::overflow_error if it does not fit.
std::uint64_t rule_count(int n);

/// The rule at position `index` in lexicographic order of rule names.
Rule rule_at(int n, std::uint64_t index);

inline constexpr std::uint64_t kDefaultRuleCap = 100'000'000;

/// Calls `visit` on every n-state rule in lexicographic name order.
/// Throws std::length_error when n^(n^2) exceeds `cap`.
void enumerate_rules(int n, const std::function<void(const Rule&)>& visit,
                     std::uint64_t cap = kDefaultRuleCap);

void to_json(nlohmann::json& j, const Rule& rule);
Rule rule_from_json(const nlohmann::json& j);

}  // namespace wrps

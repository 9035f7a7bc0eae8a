#include "wrps/rule.hpp"

#include <charconv>
#include <stdexcept>

namespace wrps {

namespace {

void check_state_count(int n) {
    if (n < 2 || n > kMaxStates) {
        throw std::invalid_argument("state count must be in [2, 256], got " + std::to_string(n));
    }
}

// Position of f(a, b) in the rule name.
std::size_t name_position(int n, int a, int b) {
    return static_cast<std::size_t>(n - 1 - a) * n + static_cast<std::size_t>(n - 1 - b);
}

Rule from_name_values(int n, const std::vector<int>& values) {
    const auto cells = static_cast<std::size_t>(n) * n;
    if (values.size() != cells) {
        throw std::invalid_argument("rule name has " + std::to_string(values.size()) +
                                    " values, expected n^2 = " + std::to_string(cells));
    }
    std::vector<State> table(cells);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int v = values[name_position(n, a, b)];
            if (v < 0 || v >= n) {
                throw std::invalid_argument("rule value " + std::to_string(v) + " is not a state below " +
                                            std::to_string(n));
            }
            table[static_cast<std::size_t>(a) * n + b] = static_cast<State>(v);
        }
    }
    return Rule(n, std::move(table));
}

}  // namespace

Rule::Rule(int n, std::vector<State> table) : n_(n), table_(std::move(table)) {
    check_state_count(n);
    if (table_.size() != static_cast<std::size_t>(n) * n) {
        throw std::invalid_argument("rule table must have n^2 entries");
    }
    for (State v : table_) {
        if (v >= n) {
            throw std::invalid_argument("rule table entry out of range");
        }
    }
}

Rule Rule::from_function(int n, const std::function<int(int, int)>& g) {
    check_state_count(n);
    std::vector<State> table(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int v = g(a, b);
            if (v < 0 || v >= n) {
                throw std::invalid_argument("rule function value out of range");
            }
            table[static_cast<std::size_t>(a) * n + b] = static_cast<State>(v);
        }
    }
    return Rule(n, std::move(table));
}

Rule parse_rule(std::string_view name, int n) {
    check_state_count(n);
    std::vector<int> values;
    if (n <= 10) {
        values.reserve(name.size());
        for (char c : name) {
            if (c < '0' || c > '9') {
                throw std::invalid_argument(std::string("invalid rule digit '") + c + "'");
            }
            values.push_back(c - '0');
        }
    } else {
        std::size_t pos = 0;
        while (pos <= name.size()) {
            const std::size_t comma = std::min(name.find(',', pos), name.size());
            const std::string_view field = name.substr(pos, comma - pos);
            int v = 0;
            const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (field.empty() || ec != std::errc{} || end != field.data() + field.size()) {
                throw std::invalid_argument("invalid rule value '" + std::string(field) + "'");
            }
            values.push_back(v);
            pos = comma + 1;
        }
    }
    return from_name_values(n, values);
}

std::string format_rule(const Rule& rule) {
    const int n = rule.n();
    std::string out;
    for (int a = n - 1; a >= 0; --a) {
        for (int b = n - 1; b >= 0; --b) {
            const int v = rule(static_cast<State>(a), static_cast<State>(b));
            if (n <= 10) {
                out.push_back(static_cast<char>('0' + v));
            } else {
                if (!out.empty()) {
                    out.push_back(',');
                }
                out += std::to_string(v);
            }
        }
    }
    return out;
}

Rule random_rule(int n, SplitMix64& rng) {
    check_state_count(n);
    std::vector<State> table(static_cast<std::size_t>(n) * n);
    for (auto& v : table) {
        v = static_cast<State>(rng.below(static_cast<std::uint64_t>(n)));
    }
    return Rule(n, std::move(table));
}

Rule random_rule(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return random_rule(n, rng);
}

std::uint64_t rule_count(int n) {
    check_state_count(n);
    return ipow(static_cast<std::uint64_t>(n), static_cast<unsigned>(n * n));
}

Rule rule_at(int n, std::uint64_t index) {
    const std::uint64_t total = rule_count(n);
    if (index >= total) {
        throw std::out_of_range("rule index out of range");
    }
    // The last name position is the least significant base-n digit.
    const auto cells = static_cast<std::size_t>(n) * n;
    std::vector<int> values(cells);
    for (std::size_t pos = cells; pos-- > 0;) {
        values[pos] = static_cast<int>(index % static_cast<std::uint64_t>(n));
        index /= static_cast<std::uint64_t>(n);
    }
    return from_name_values(n, values);
}

void enumerate_rules(int n, const std::function<void(const Rule&)>& visit, std::uint64_t cap) {
    check_state_count(n);
    std::uint64_t total = 0;
    try {
        total = rule_count(n);
    } catch (const std::overflow_error&) {
        throw std::length_error("rule space of n=" + std::to_string(n) + " exceeds the enumeration cap");
    }
    if (total > cap) {
        throw std::length_error("rule space n^(n^2) = " + std::to_string(total) + " exceeds cap " +
                                std::to_string(cap));
    }
    const auto cells = static_cast<std::size_t>(n) * n;
    std::vector<State> table(cells, 0);
    // Odometer over name positions; position 0 is the most significant digit.
    for (std::uint64_t k = 0; k < total; ++k) {
        visit(Rule(n, table));
        for (std::size_t pos = cells; pos-- > 0;) {
            const int a = n - 1 - static_cast<int>(pos / n);
            const int b = n - 1 - static_cast<int>(pos % n);
            auto& v = table[static_cast<std::size_t>(a) * n + b];
            if (++v < n) {
                break;
            }
            v = 0;
        }
    }
}

void to_json(nlohmann::json& j, const Rule& rule) {
    std::vector<int> values;
    const int n = rule.n();
    for (int a = n - 1; a >= 0; --a) {
        for (int b = n - 1; b >= 0; --b) {
            values.push_back(rule(static_cast<State>(a), static_cast<State>(b)));
        }
    }
    j = nlohmann::json{{"n", n}, {"table", values}};
}

Rule rule_from_json(const nlohmann::json& j) {
    const int n = j.at("n").get<int>();
    check_state_count(n);
    return from_name_values(n, j.at("table").get<std::vector<int>>());
}

}  // namespace wrps

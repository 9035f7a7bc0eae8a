#include "wrps/decidability.hpp"

#include <map>
#include <stdexcept>

#include "wrps/rng.hpp"

namespace wrps {

namespace {

using Wide = unsigned __int128;

Wide wide_pow(Wide base, int exp) {
    Wide out = 1;
    for (int i = 0; i < exp; ++i) {
        out *= base;
    }
    return out;
}

std::uint64_t narrow(Wide v) {
    if (v > static_cast<Wide>(UINT64_MAX)) {
        throw std::overflow_error("value exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(v);
}

// A_{k,l} = C(n-1, k) (l+1)^k (n-1-l)^{n-1-k}, with 0^0 = 1.
Wide term_A(int n, int k, int l) {
    return static_cast<Wide>(binomial(static_cast<std::uint64_t>(n - 1), static_cast<std::uint64_t>(k))) *
           wide_pow(static_cast<Wide>(l + 1), k) * wide_pow(static_cast<Wide>(n - 1 - l), n - 1 - k);
}

Wide nested_sum(int n, int m, int k_next) {
    Wide total = 0;
    for (int k = 0; k <= n - 1; ++k) {
        const Wide inner = m == 1 ? static_cast<Wide>(k + 1) * wide_pow(static_cast<Wide>(n), n - 2)
                                  : nested_sum(n, m - 1, k);
        total += term_A(n, k, k_next) * inner;
    }
    return total;
}

void check_label(std::span<const State> label, int n, const char* what) {
    if (label.empty()) {
        throw std::invalid_argument(std::string(what) + " must be non-empty");
    }
    for (State v : label) {
        if (v >= n) {
            throw std::invalid_argument(std::string(what) + " uses a state not below n = " + std::to_string(n));
        }
    }
}

}  // namespace

Lad::Lad(int n, int tau, std::vector<State> targets) : n_(n), tau_(tau), targets_(std::move(targets)) {
    if (n < 1 || tau < 1 || targets_.size() != static_cast<std::size_t>(n) * tau) {
        throw std::invalid_argument("LAD needs tau * n arc targets");
    }
    for (State v : targets_) {
        if (v >= n) {
            throw std::invalid_argument("LAD arc target out of range");
        }
    }
}

Lad build_lad(const Rule& rule, std::span<const State> a) {
    check_label(a, rule.n(), "label");
    const int n = rule.n();
    const int tau = static_cast<int>(a.size());
    std::vector<State> targets(static_cast<std::size_t>(n) * tau);
    for (int i = 0; i < tau; ++i) {
        for (int j = 0; j < n; ++j) {
            targets[static_cast<std::size_t>(i) * n + j] = rule(a[static_cast<std::size_t>(i)], static_cast<State>(j));
        }
    }
    return Lad(n, tau, std::move(targets));
}

bool in_E(const Lad& lad, std::span<const State> b) {
    if (static_cast<int>(b.size()) != lad.tau()) {
        throw std::invalid_argument("in_E: label length differs from LAD");
    }
    const int tau = lad.tau();
    for (int i = 0; i < tau; ++i) {
        if (b[static_cast<std::size_t>(i)] >= lad.n() ||
            lad.target(i, b[static_cast<std::size_t>(i)]) != b[static_cast<std::size_t>((i + 1) % tau)]) {
            return false;
        }
    }
    return true;
}

bool in_D(const Lad& lad, std::span<const State> b) {
    if (!in_E(lad, b)) {
        return false;
    }
    const int n = lad.n();
    const int tau = lad.tau();
    const int nodes = lad.node_count();
    // Reverse adjacency in CSR form, then BFS backwards from (0, b_0).
    std::vector<int> start(static_cast<std::size_t>(nodes) + 1, 0);
    for (int i = 0; i < tau; ++i) {
        for (int j = 0; j < n; ++j) {
            const int dst = ((i + 1) % tau) * n + lad.target(i, static_cast<State>(j));
            ++start[static_cast<std::size_t>(dst) + 1];
        }
    }
    for (int v = 0; v < nodes; ++v) {
        start[static_cast<std::size_t>(v) + 1] += start[static_cast<std::size_t>(v)];
    }
    std::vector<int> fill(start.begin(), start.end() - 1);
    std::vector<int> preds(static_cast<std::size_t>(nodes));
    for (int i = 0; i < tau; ++i) {
        for (int j = 0; j < n; ++j) {
            const int dst = ((i + 1) % tau) * n + lad.target(i, static_cast<State>(j));
            preds[static_cast<std::size_t>(fill[static_cast<std::size_t>(dst)]++)] = i * n + j;
        }
    }
    std::vector<char> seen(static_cast<std::size_t>(nodes), 0);
    std::vector<int> queue{static_cast<int>(b[0])};
    seen[b[0]] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (int k = start[static_cast<std::size_t>(v)]; k < start[static_cast<std::size_t>(v) + 1]; ++k) {
            const int u = preds[static_cast<std::size_t>(k)];
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                queue.push_back(u);
            }
        }
    }
    return static_cast<int>(queue.size()) == nodes;
}

bool decides_by_simulation(const Rule& rule, std::span<const State> a, std::span<const State> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("decides_by_simulation: label lengths differ");
    }
    check_label(a, rule.n(), "label A");
    check_label(b, rule.n(), "label B");
    if (!right_extends(rule, a, b)) {
        return false;
    }
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
            return false;
        }
    }
    return true;
}

std::uint64_t count_D_formula(int n, int tau) {
    if (n < 1 || tau < 1) {
        throw std::invalid_argument("count_D_formula: n and tau must be positive");
    }
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t p = ipow(un, static_cast<unsigned>(tau)) - ipow(un - 1, static_cast<unsigned>(tau));
    if (n == 1) {
        return p;  // n^{-tau} * n^tau
    }
    return checked_mul(ipow(un, static_cast<unsigned>(tau * (n - 2))), p);
}

LadCount count_D_exhaustive(int n, int tau, std::uint64_t cap) {
    if (n < 2 || tau < 1) {
        throw std::invalid_argument("count_D_exhaustive: need n >= 2 and tau >= 1");
    }
    LadCount out;
    try {
        out.total = ipow(static_cast<std::uint64_t>(n), static_cast<unsigned>(tau * n));
    } catch (const std::overflow_error&) {
        throw std::length_error("LAD space exceeds the enumeration cap");
    }
    if (out.total > cap) {
        throw std::length_error("LAD space n^(tau n) = " + std::to_string(out.total) + " exceeds cap " +
                                std::to_string(cap));
    }
    out.formula = count_D_formula(n, tau);

    // B = 0...0. Condition (1) pins the arcs leaving (i, 0); every other arc
    // runs through the odometer. Assignments violating (1) are never in D.
    const Label b(static_cast<std::size_t>(tau), 0);
    std::vector<State> targets(static_cast<std::size_t>(n) * tau, 0);
    std::vector<std::size_t> free_slots;
    for (int i = 0; i < tau; ++i) {
        for (int j = 1; j < n; ++j) {
            free_slots.push_back(static_cast<std::size_t>(i) * n + j);
        }
    }
    const std::uint64_t assignments = ipow(static_cast<std::uint64_t>(n), static_cast<unsigned>(free_slots.size()));
    for (std::uint64_t k = 0; k < assignments; ++k) {
        if (in_D(Lad(n, tau, targets), b)) {
            ++out.count;
        }
        for (std::size_t p = free_slots.size(); p-- > 0;) {
            auto& v = targets[free_slots[p]];
            if (++v < n) {
                break;
            }
            v = 0;
        }
    }
    out.match = out.count == out.formula;
    return out;
}

DecidingProbability p_decides_simple(int n, int tau) {
    if (n < 1 || tau < 1) {
        throw std::invalid_argument("p_decides_simple: n and tau must be positive");
    }
    if (tau > n) {
        throw std::invalid_argument("p_decides_simple: no simple label of length tau > n");
    }
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t n_tau = ipow(un, static_cast<unsigned>(tau));
    const Fraction conditional(n_tau - ipow(un - 1, static_cast<unsigned>(tau)), n_tau);
    return {conditional * Fraction(1, n_tau), conditional};
}

IdentityValues combinatorial_identity_S(int n, int m, int k_next) {
    if (n < 2 || m < 1 || k_next < 0 || k_next > n - 1) {
        throw std::invalid_argument("combinatorial_identity_S: need n >= 2, m >= 1, 0 <= k_next <= n-1");
    }
    IdentityValues out;
    out.direct = narrow(nested_sum(n, m, k_next));
    const Wide p_next = wide_pow(static_cast<Wide>(n), m + 1) - wide_pow(static_cast<Wide>(n - 1), m + 1);
    out.closed = narrow(wide_pow(static_cast<Wide>(n), (m + 1) * (n - 2)) *
                        (p_next + static_cast<Wide>(k_next) * wide_pow(static_cast<Wide>(n - 1), m)));
    return out;
}

std::vector<ConditionalEstimate> decay_of_nonsimple_conditional(std::span<const int> n_list,
                                                                std::span<const State> a,
                                                                std::span<const State> b,
                                                                std::uint64_t samples, std::uint64_t seed,
                                                                double z) {
    std::vector<ConditionalEstimate> out;
    if (samples == 0) {
        return out;
    }
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("labels must be non-empty and of equal length");
    }
    const std::size_t tau = a.size();
    // Entries of f forced by A -> B.
    std::map<std::pair<State, State>, State> forced;
    for (std::size_t i = 0; i < tau; ++i) {
        auto [it, inserted] = forced.emplace(std::make_pair(a[i], b[i]), b[(i + 1) % tau]);
        if (!inserted && it->second != b[(i + 1) % tau]) {
            throw std::invalid_argument("A cannot right-extend to B under any rule");
        }
    }
    for (int n : n_list) {
        check_label(a, n, "label A");
        check_label(b, n, "label B");
        ConditionalEstimate row;
        row.n = n;
        row.samples = samples;
        const std::uint64_t base = stream_seed(seed, static_cast<std::uint64_t>(n));
        for (std::uint64_t k = 0; k < samples; ++k) {
            SplitMix64 rng(stream_seed(base, k));
            const Rule drawn = random_rule(n, rng);
            std::vector<State> table(drawn.table().begin(), drawn.table().end());
            for (const auto& [pair, value] : forced) {
                table[static_cast<std::size_t>(pair.first) * n + pair.second] = value;
            }
            const Rule rule(n, std::move(table));
            if (in_D(build_lad(rule, a), b)) {
                ++row.decided;
            }
        }
        row.estimate = static_cast<double>(row.decided) / static_cast<double>(samples);
        row.ci = wilson_interval(row.decided, samples, z);
        out.push_back(row);
    }
    return out;
}

}  // namespace wrps

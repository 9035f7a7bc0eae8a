#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wrps/label.hpp"
#include "wrps/numeric.hpp"
#include "wrps/rule.hpp"

namespace wrps {

/// Label assignment digraph of a label A: tau parts of n nodes each, and the
/// single out-arc (i, j) -> (i+1 mod tau, f(a_i, j)).
class Lad {
public:
    /// `targets[i*n + j]` is the endpoint in part i+1 of the arc leaving (i, j).
    Lad(int n, int tau, std::vector<State> targets);

    int n() const { return n_; }
    int tau() const { return tau_; }
    int node_count() const { return n_ * tau_; }
    State target(int part, State j) const { return targets_[static_cast<std::size_t>(part) * n_ + j]; }

private:
    int n_;
    int tau_;
    std::vector<State> targets_;
};

Lad build_lad(const Rule& rule, std::span<const State> a);

/// Condition (1): the cycle (0,b_0) -> (1,b_1) -> ... -> (0,b_0) is present.
bool in_E(const Lad& lad, std::span<const State> b);

/// Conditions (1) and (2): additionally every node has a path to (0, b_0).
bool in_D(const Lad& lad, std::span<const State> b);

/// A => B by iterating c_{j+1} = f(a_{j mod tau}, c_j) from every seed c_0
/// for n*tau + tau steps and looking for a phase-aligned hit on B.
bool decides_by_simulation(const Rule& rule, std::span<const State> a, std::span<const State> b);

/// n^{tau(n-2)} (n^tau - (n-1)^tau), the size of D(A, B) for simple A.
std::uint64_t count_D_formula(int n, int tau);

struct LadCount {
    std::uint64_t count = 0;    ///< digraphs in D(A, B)
    std::uint64_t total = 0;    ///< all n^{tau n} tau-partite functional digraphs
    std::uint64_t formula = 0;  ///< count_D_formula(n, tau)
    bool match = false;
};

inline constexpr std::uint64_t kDefaultLadCap = 10'000'000;

/// Exhaustive count of D(A, B) with B = 0...0 over all arc assignments.
/// Throws std::length_error when n^{tau n} exceeds `cap`.
LadCount count_D_exhaustive(int n, int tau, std::uint64_t cap = kDefaultLadCap);

struct DecidingProbability {
    Fraction joint;        ///< P(A => B)
    Fraction conditional;  ///< P(A => B | A -> B)
};

/// Exact deciding probability for a simple label of length tau <= n.
DecidingProbability p_decides_simple(int n, int tau);

struct IdentityValues {
    std::uint64_t direct = 0;  ///< nested summation
    std::uint64_t closed = 0;  ///< n^{(m+1)(n-2)} [P_{m+1} + k (n-1)^m]
};

/// The nested sum S_m(k_next) evaluated term by term and in closed form.
IdentityValues combinatorial_identity_S(int n, int m, int k_next);

struct ConditionalEstimate {
    int n = 0;
    std::uint64_t samples = 0;
    std::uint64_t decided = 0;
    double estimate = 0.0;
    Interval ci;
};

/// Monte Carlo estimate of P(A => B | A -> B) for each n, sampling rules
/// uniformly among those with A -> B. Throws std::invalid_argument if A -> B
/// is impossible for every rule or a state does not fit below some n.
std::vector<ConditionalEstimate> decay_of_nonsimple_conditional(std::span<const int> n_list,
                                                                std::span<const State> a,
                                                                std::span<const State> b,
                                                                std::uint64_t samples, std::uint64_t seed,
                                                                double z = 1.96);

}  // namespace wrps

#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wrps {

/// Cell state of an n-state automaton. n is capped at 256.
using State = std::uint8_t;
inline constexpr int kMaxStates = 256;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
std::uint64_t ipow(std::uint64_t base, unsigned exp);

/// Euler's totient.
std::uint64_t totient(std::uint64_t d);
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);
std::uint64_t factorial(std::uint64_t n);

/// Non-negative reduced fraction with 64-bit parts; arithmetic throws on overflow.
struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    Fraction() = default;
    Fraction(std::uint64_t num, std::uint64_t den);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    friend bool operator==(const Fraction&, const Fraction&) = default;
};

Fraction operator*(const Fraction& a, const Fraction& b);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

}  // namespace wrps

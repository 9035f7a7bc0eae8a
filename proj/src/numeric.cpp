#include "wrps/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace wrps {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw std::overflow_error("64-bit overflow in multiplication");
    }
    return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw std::overflow_error("64-bit overflow in addition");
    }
    return out;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
    std::uint64_t out = 1;
    for (unsigned i = 0; i < exp; ++i) {
        out = checked_mul(out, base);
    }
    return out;
}

std::uint64_t totient(std::uint64_t d) {
    if (d == 0) {
        throw std::invalid_argument("totient of 0");
    }
    std::uint64_t result = d;
    for (std::uint64_t p = 2; p * p <= d; ++p) {
        if (d % p == 0) {
            while (d % p == 0) {
                d /= p;
            }
            result -= result / p;
        }
    }
    if (d > 1) {
        result -= result / d;
    }
    return result;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t out = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // out * (n - k + i) is divisible by i at every step.
        const std::uint64_t g = std::gcd(out, i);
        out = checked_mul(out / g, (n - k + i) / (i / g));
    }
    return out;
}

std::uint64_t factorial(std::uint64_t n) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 2; i <= n; ++i) {
        out = checked_mul(out, i);
    }
    return out;
}

Fraction::Fraction(std::uint64_t num_, std::uint64_t den_) : num(num_), den(den_) {
    if (den == 0) {
        throw std::invalid_argument("fraction with zero denominator");
    }
    const std::uint64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
}

Fraction operator*(const Fraction& a, const Fraction& b) {
    const std::uint64_t g1 = std::gcd(a.num, b.den);
    const std::uint64_t g2 = std::gcd(b.num, a.den);
    return Fraction(checked_mul(a.num / g1, b.num / g2), checked_mul(a.den / g2, b.den / g1));
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace wrps

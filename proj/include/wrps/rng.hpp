#pragma once

#include <cstdint>

namespace wrps {

// SplitMix64 (Steele, Lea, Flood 2014). Every randomized routine in the
// library draws from this generator so runs are reproducible from a seed.
class SplitMix64 {
public:
    static constexpr const char* kName = "splitmix64";

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform on [0, bound). Lemire's multiply-shift with rejection, unbiased.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t x = next();
        auto m = static_cast<unsigned __int128>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = next();
                m = static_cast<unsigned __int128>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Seed of the independent stream used for sample `index` of a run seeded
/// with `master`. Results never depend on how samples are split over threads.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    return SplitMix64::mix(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace wrps

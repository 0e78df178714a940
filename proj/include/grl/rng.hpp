#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace grl {

/// Seeded 64-bit Mersenne Twister with platform-independent draws.
/// Passed by reference wherever randomness is consumed; never global.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Seed from several words, e.g. (instance seed, episode seed).
    Rng(std::initializer_list<std::uint64_t> words) {
        std::vector<std::uint32_t> parts;
        for (auto w : words) {
            parts.push_back(static_cast<std::uint32_t>(w));
            parts.push_back(static_cast<std::uint32_t>(w >> 32));
        }
        std::seed_seq seq(parts.begin(), parts.end());
        engine_.seed(seq);
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform in [0, n); n > 0.
    std::size_t index(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % bound);
    }

    /// Fresh seed for a child stream.
    std::uint64_t split() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Independent child seed for a tagged sub-stream, e.g. derive_seed(run, {stage, 7}).
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
    std::vector<std::uint32_t> parts{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32)};
    for (auto t : tags) {
        parts.push_back(static_cast<std::uint32_t>(t));
        parts.push_back(static_cast<std::uint32_t>(t >> 32));
    }
    std::seed_seq seq(parts.begin(), parts.end());
    std::mt19937_64 engine(seq);
    return engine();
}

} // namespace grl

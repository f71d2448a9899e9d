// rng.hpp - seedable, portable random streams
//
// All randomized stages draw from named sub-streams of a single run seed
// (e.g. "coarsen.kmeans", "qaoa.sample", "fm.shuffle"), so any stage can be
// reproduced in isolation. The engine is std::mt19937_64, whose output
// sequence is fully specified by the standard; doubles and bounded integers
// are mapped manually because std::*_distribution outputs are not portable.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace qpart {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derives a sub-seed from (root seed, stream name, index). FNV-1a over the
// name, then splitmix64 to decorrelate nearby indices.
inline std::uint64_t stream_seed(std::uint64_t root, std::string_view name, std::uint64_t index = 0) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::uint64_t state = root ^ h;
    state ^= 0xA5A5A5A5A5A5A5A5ULL * (index + 1);
    std::uint64_t s = splitmix64(state);
    return splitmix64(state) ^ s;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // Independent child stream; does not advance this generator.
    Rng stream(std::string_view name, std::uint64_t index = 0) const {
        return Rng(stream_seed(seed_, name, index));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound); rejection sampling keeps it unbiased.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = bound == 0 ? 0 : (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % bound;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace qpart

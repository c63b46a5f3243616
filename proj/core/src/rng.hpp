#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace qfuse::detail {

inline std::uint64_t fnv1a64(std::string_view data,
                             std::uint64_t hash = 0xcbf29ce484222325ULL) {
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

/// mt19937_64 with hand-rolled derived draws. The standard distributions are
/// implementation-defined, so bounded ints, unit doubles, and shuffles are
/// built here directly from the raw 64-bit stream to keep outputs identical
/// across standard libraries.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound) via rejection sampling. bound > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            using std::swap;
            swap(v[i - 1], v[next_below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace qfuse::detail

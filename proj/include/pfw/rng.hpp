#pragma once

#include <cstdint>
#include <limits>

namespace pfw {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based key: the same (root, stream, index) always yields the same
/// seed, independent of the order in which keys are requested.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) {
    return mix64(mix64(mix64(root) ^ stream) ^ (index * 0xd1b54a32d192ed03ULL));
}

/// SplitMix64 stream. Cheap to construct, so one is created per sample.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0, 1): never returns 0 or 1.
    double uniform_open() {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace pfw

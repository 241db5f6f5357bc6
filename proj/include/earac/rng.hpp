#pragma once

// Counter-addressable random streams.
//
// SplitMix64 output i of a stream with key K is mix(K + (i + 1) * gamma), so
// any draw can be computed directly from (key, index). Monte Carlo trials,
// broker pairs and SR permutations all take their randomness this way, which
// makes every result independent of evaluation order or threading.

#include <cstdint>
#include <limits>

namespace earac {

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// i-th output of the stream keyed by `key`.
constexpr std::uint64_t stream_draw(std::uint64_t key, std::uint64_t index) {
    return splitmix_mix(key + (index + 1) * kSplitMixGamma);
}

// Child key for a labelled sub-stream.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t label) {
    return splitmix_mix(parent ^ splitmix_mix(label + kSplitMixGamma));
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Sequential view of a keyed stream; satisfies UniformRandomBitGenerator so
// it plugs into <random> distributions.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t key = 0) : key_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return stream_draw(key_, counter_++); }

    std::uint64_t key() const { return key_; }
    std::uint64_t position() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace earac

#pragma once
// Seed expansion: every random stream of a run is derived from the run's
// root seed and a stream counter, so any piece can be regenerated alone.

#include <cstdint>
#include <random>

namespace ordsoft {

using Rng = std::mt19937_64;

enum class Stream : std::uint64_t {
    OuterSplit = 1,
    InnerSplit = 2,
    Init = 3,
    Shuffle = 4,
    Search = 5,
    Synth = 6,
    Noise = 7,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, Stream stream, std::uint64_t index = 0) {
    return splitmix64(splitmix64(root ^ splitmix64(static_cast<std::uint64_t>(stream))) + index);
}

inline Rng make_rng(std::uint64_t root, Stream stream, std::uint64_t index = 0) {
    return Rng(derive_seed(root, stream, index));
}

}  // namespace ordsoft

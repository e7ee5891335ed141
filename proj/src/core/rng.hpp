#pragma once

#include <cstdint>
#include <random>

namespace hybridchain {

// splitmix64 finalizer; used to derive independent substream seeds so that
// changes in one subsystem's draw count never shift another subsystem's stream.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
    return mix64(mix64(seed ^ mix64(stream)) ^ index);
}

// Fixed stream tags. Values are arbitrary but frozen: reseeding one stream
// must not move any other.
namespace stream {
inline constexpr std::uint64_t genesis = 0x01;
inline constexpr std::uint64_t users = 0x02;
inline constexpr std::uint64_t schedule = 0x03;
inline constexpr std::uint64_t transaction = 0x04;  // per-transaction, indexed by id
inline constexpr std::uint64_t assignment = 0x05;   // per-epoch, indexed by epoch
inline constexpr std::uint64_t adversary = 0x06;
inline constexpr std::uint64_t bootstrap = 0x07;
}  // namespace stream

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
    return Rng(derive_seed(seed, stream, index));
}

}  // namespace hybridchain

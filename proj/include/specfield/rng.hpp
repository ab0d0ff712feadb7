#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>

namespace specfield::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block function (Salmon et al., Random123).
Counter philox4x32(Counter ctr, Key key);

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of the stream with the given index under a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Two independent standard normals that are a pure function of (seed, point).
/// `point` has at most four coordinates, each representable as int32.
std::pair<double, double> normal_pair(std::uint64_t seed, std::span<const std::int64_t> point);

}  // namespace specfield::rng

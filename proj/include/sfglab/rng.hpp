#pragma once

#include <array>
#include <cstdint>

namespace sfglab {

/// Philox 4x32-10 counter-based generator (Salmon, Moraes, Dror & Shaw,
/// "Parallel random numbers: as easy as 1, 2, 3", SC'11). Stateless: every
/// 128-bit counter/64-bit key pair maps to an independent 128-bit block, so
/// draws can be made in any order by any thread with identical results.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Purpose tags keep the per-shot random streams disjoint no matter how many
/// draws each consumer makes.
enum class RngStream : std::uint32_t {
    PairField = 0,     ///< one complex normal per pair
    EnvelopeJitter = 1,///< one standard normal per shot
    PumpDetuning = 2,  ///< one uniform per shot
    ModeField = 3,     ///< one complex normal per mode (uncorrelated control)
};

/// One Philox block addressed by (seed, shot, stream, index), expanded into
/// two doubles. Uniforms are strictly inside (0,1); normals come from a
/// Box-Muller pair, so consumption is fixed and rejection-free.
struct RandomBlock {
    double a;
    double b;
};

RandomBlock random_uniforms(std::uint64_t seed, std::uint64_t shot, RngStream stream,
                            std::uint32_t index);
RandomBlock random_normals(std::uint64_t seed, std::uint64_t shot, RngStream stream,
                           std::uint32_t index);

} // namespace sfglab

#include "sfglab/rng.hpp"

#include <cmath>
#include <numbers>

namespace sfglab {

namespace {

constexpr std::uint32_t kWeyl0 = 0x9E3779B9u; // golden ratio
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u; // sqrt(3) - 1
constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = std::uint64_t(kMult0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(kMult1) * ctr[2];
    const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
    const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

/// Map 32 high-quality bits to a double strictly inside (0,1).
inline double bits_to_unit(std::uint64_t hi, std::uint64_t lo) {
    const std::uint64_t x = (hi << 32) | lo;
    return (double(x >> 11) + 0.5) * 0x1p-53;
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        philox_round(counter, key);
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return counter;
}

RandomBlock random_uniforms(std::uint64_t seed, std::uint64_t shot, RngStream stream,
                            std::uint32_t index) {
    const std::array<std::uint32_t, 4> ctr = {
        std::uint32_t(shot), std::uint32_t(shot >> 32),
        static_cast<std::uint32_t>(stream), index};
    const std::array<std::uint32_t, 2> key = {std::uint32_t(seed),
                                              std::uint32_t(seed >> 32)};
    const auto out = philox4x32(ctr, key);
    return {bits_to_unit(out[0], out[1]), bits_to_unit(out[2], out[3])};
}

RandomBlock random_normals(std::uint64_t seed, std::uint64_t shot, RngStream stream,
                           std::uint32_t index) {
    const RandomBlock u = random_uniforms(seed, shot, stream, index);
    const double r = std::sqrt(-2.0 * std::log(u.a));
    const double phi = 2.0 * std::numbers::pi * u.b;
    return {r * std::cos(phi), r * std::sin(phi)};
}

} // namespace sfglab

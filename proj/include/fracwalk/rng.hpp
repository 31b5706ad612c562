#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace fracwalk {

// Counter-based randomness. Every draw is a pure function of
// (seed, replica, vertex, draw channel), so vertices and replicas can be
// sampled lazily, in any order and on any number of threads, and two walks
// probing the same vertex of the same realized graph see the same value.

// Channel indices. One vertex owns several independent draws.
inline constexpr std::uint32_t kDrawLookback = 0;  // parent offset k_z
inline constexpr std::uint32_t kDrawColor = 1;     // component color coin
inline constexpr std::uint32_t kDrawFreshCoin = 2; // adjusted-walk coin
inline constexpr std::uint32_t kDrawGauss = 3;     // fGn oracle normals

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

// Philox4x32-10 block cipher (Salmon et al.), the usual counter-based PRNG.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> x,
                                               std::array<std::uint32_t, 2> k) {
  for (int r = 0;;) {
    const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * x[0];
    const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * x[2];
    x = {std::uint32_t(p1 >> 32) ^ x[1] ^ k[0], std::uint32_t(p1),
         std::uint32_t(p0 >> 32) ^ x[3] ^ k[1], std::uint32_t(p0)};
    if (++r == 10) break;
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return x;
}

} // namespace detail

// 128 random bits for one (seed, replica, vertex, draw) address.
inline std::array<std::uint32_t, 4> keyed_block(std::uint64_t seed, std::uint32_t replica,
                                                std::int64_t vertex, std::uint32_t draw) {
  const auto v = static_cast<std::uint64_t>(vertex);
  return detail::philox4x32({draw, replica, std::uint32_t(v), std::uint32_t(v >> 32)},
                            {std::uint32_t(seed), std::uint32_t(seed >> 32)});
}

inline std::uint64_t keyed_bits(std::uint64_t seed, std::uint32_t replica, std::int64_t vertex,
                                std::uint32_t draw) {
  const auto b = keyed_block(seed, replica, vertex, draw);
  return (std::uint64_t(b[1]) << 32) | b[0];
}

// Uniform on the open interval (0,1); safe to feed to log().
inline double to_open_unit(std::uint64_t bits) {
  return (double(bits >> 11) + 0.5) * 0x1p-53;
}

inline double keyed_uniform(std::uint64_t seed, std::uint32_t replica, std::int64_t vertex,
                            std::uint32_t draw) {
  return to_open_unit(keyed_bits(seed, replica, vertex, draw));
}

// One standard-normal pair per block (Box-Muller), deterministic per address.
inline std::pair<double, double> keyed_normal_pair(std::uint64_t seed, std::uint32_t replica,
                                                   std::int64_t vertex, std::uint32_t draw) {
  const auto b = keyed_block(seed, replica, vertex, draw);
  const double u = to_open_unit((std::uint64_t(b[1]) << 32) | b[0]);
  const double v = to_open_unit((std::uint64_t(b[3]) << 32) | b[2]);
  const double r = std::sqrt(-2.0 * std::log(u));
  const double a = 6.283185307179586476925286766559 * v;
  return {r * std::cos(a), r * std::sin(a)};
}

inline double keyed_normal(std::uint64_t seed, std::uint32_t replica, std::int64_t vertex,
                           std::uint32_t draw) {
  return keyed_normal_pair(seed, replica, vertex, draw).first;
}

} // namespace fracwalk

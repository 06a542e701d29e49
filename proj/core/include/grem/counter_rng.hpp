// Copyright 2026 The grem-hrhd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace grem {

__extension__ typedef unsigned __int128 uint128;

/// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: the
/// output is a pure function of (counter, key).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

constexpr PhiloxKey key_from_seed(std::uint64_t seed) noexcept {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// First 64 bits of the Philox block for a 64-bit counter in domain `domain`.
constexpr std::uint64_t philox_bits(std::uint64_t seed, std::uint32_t domain,
                                    std::uint64_t counter) noexcept {
  const auto out = philox4x32_10(
      {static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32), domain, 0u},
      key_from_seed(seed));
  return (std::uint64_t{out[1]} << 32) | out[0];
}

/// Maps 64 random bits to a double strictly inside (0, 1): (k + 1/2) 2^-52 for
/// the top 52 bits k. Every value is exact, so 1 is never reached.
constexpr double uniform_open(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 12) * 0x1.0p-52 + 0x1.0p-53;
}

/// 1 - uniform_open(bits), computed without cancellation.
constexpr double uniform_open_complement(std::uint64_t bits) noexcept {
  return static_cast<double>((std::uint64_t{1} << 52) - 1 - (bits >> 12)) * 0x1.0p-52 + 0x1.0p-53;
}

/// Standard normal quantile, Wichura's AS241 (PPND16). Relative accuracy
/// about 1e-16 on (0, 1); uses only +, *, /, sqrt and log.
double normal_icdf(double p) noexcept;

/// Tags separating independent consumers of one master seed.
enum class StreamTag : std::uint64_t {
  environment = 0x454e56ull,  // "ENV"
  dynamics = 0x44594eull,     // "DYN"
  kprocess = 0x4b50ull,       // "KP"
  pointproc = 0x505050ull,    // "PPP"
  test = 0x545354ull,         // "TST"
};

/// SplitMix64 finaliser; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seed for replica `index` of stream `tag`. For a fixed (master, tag) the
/// map index -> seed is injective.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    StreamTag tag) noexcept {
  const std::uint64_t base = mix64(mix64(master) ^ mix64(static_cast<std::uint64_t>(tag) * 0xD1B54A32D192ED03ull));
  return mix64(base + index * 0x9E3779B97F4A7C15ull);
}

/// Sequential stream over Philox blocks. Two 64-bit words per block; the
/// position is (seed, counter) so a stream can be replayed or skipped.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint32_t kDomain = 0x53545245u;  // "STRE"

  explicit CounterStream(std::uint64_t seed, std::uint64_t counter = 0) noexcept
      : seed_(seed), counter_(counter) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto out = philox4x32_10({static_cast<std::uint32_t>(counter_),
                                    static_cast<std::uint32_t>(counter_ >> 32), kDomain, 0u},
                                   key_from_seed(seed_));
    ++counter_;
    spare_ = (std::uint64_t{out[3]} << 32) | out[2];
    have_spare_ = true;
    return (std::uint64_t{out[1]} << 32) | out[0];
  }

  double uniform() noexcept { return uniform_open(next_u64()); }

  /// Exponential with the given mean by inversion.
  double exponential(double mean) noexcept { return -mean * std::log(uniform()); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>((static_cast<uint128>(next_u64()) * n) >> 64);
  }

  /// Geometric on {1, 2, ...} with success probability q, by inversion.
  std::uint64_t geometric(double q) noexcept;

  double normal() noexcept { return normal_icdf(uniform()); }

  /// Sum of k independent unit-mean exponentials, i.e. a Gamma(k, 1) draw.
  double erlang(std::uint64_t k) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace grem

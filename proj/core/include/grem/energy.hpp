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

#include <cstdint>

#include "grem/counter_rng.hpp"
#include "grem/params.hpp"

namespace grem {

enum class Level : std::uint32_t { first = 1, second = 2 };

/// Overrides used by tests and degenerate-dynamics checks.
enum class EnvironmentHook {
  none,
  zero_second_level,  ///< every Xi^(2) is 0
  zero_environment,   ///< every Xi^(1), Xi^(2) is 0
};

struct EnergyTriple {
  double xi = 0.0;   // sqrt(a) xi1 + sqrt(1 - a) xi2
  double xi1 = 0.0;
  double xi2 = 0.0;
};

/// Lazy two-level GREM environment. Each Gaussian is a pure function of
/// (seed, level, index): a Philox block keyed by the seed, mapped to (0, 1)
/// and through the AS241 normal quantile. Nothing is stored, so the oracle is
/// immutable and can be shared between threads.
///
/// Configurations are bit-encoded: sigma = (sigma1 << N2) | sigma2.
class EnergyOracle {
 public:
  explicit EnergyOracle(const ModelParams& params, EnvironmentHook hook = EnvironmentHook::none);

  const DerivedParams& derived() const noexcept { return d_; }
  const ModelParams& params() const noexcept { return d_.model; }
  EnvironmentHook hook() const noexcept { return hook_; }

  std::uint64_t first_level_states() const noexcept { return std::uint64_t{1} << d_.N1; }
  std::uint64_t second_level_states() const noexcept { return std::uint64_t{1} << d_.N2; }
  std::uint64_t states() const noexcept { return std::uint64_t{1} << d_.model.N; }

  /// Raw standard normal for (level, index); level 1 index < 2^N1, level 2
  /// index < 2^N. Ignores hooks. Throws std::out_of_range.
  double gaussian(Level level, std::uint64_t index) const;

  /// Random bits behind gaussian(level, index), without range checks.
  std::uint64_t raw_bits(Level level, std::uint64_t index) const noexcept {
    return philox_bits(d_.model.seed, static_cast<std::uint32_t>(level), index);
  }

  double xi1(std::uint64_t sigma1) const noexcept {
    if (hook_ == EnvironmentHook::zero_environment) return 0.0;
    return normal_icdf(uniform_open(raw_bits(Level::first, sigma1)));
  }
  double xi2(std::uint64_t sigma) const noexcept {
    if (hook_ != EnvironmentHook::none) return 0.0;
    return normal_icdf(uniform_open(raw_bits(Level::second, sigma)));
  }
  double combine(double xi1, double xi2) const noexcept { return sqrt_a_ * xi1 + sqrt_1ma_ * xi2; }
  double xi(std::uint64_t sigma) const noexcept {
    return combine(xi1(sigma >> d_.N2), xi2(sigma));
  }
  EnergyTriple energies(std::uint64_t sigma) const noexcept {
    EnergyTriple e;
    e.xi1 = xi1(sigma >> d_.N2);
    e.xi2 = xi2(sigma);
    e.xi = combine(e.xi1, e.xi2);
    return e;
  }

  std::uint64_t compose(std::uint64_t sigma1, std::uint64_t sigma2) const noexcept {
    return (sigma1 << d_.N2) | sigma2;
  }
  std::uint64_t sigma1_of(std::uint64_t sigma) const noexcept { return sigma >> d_.N2; }
  std::uint64_t sigma2_of(std::uint64_t sigma) const noexcept {
    return sigma & (second_level_states() - 1);
  }

  double sqrt_a() const noexcept { return sqrt_a_; }
  double sqrt_1ma() const noexcept { return sqrt_1ma_; }

 private:
  DerivedParams d_;
  EnvironmentHook hook_;
  double sqrt_a_;
  double sqrt_1ma_;
};

}  // namespace grem

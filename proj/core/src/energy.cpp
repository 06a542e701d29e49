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

#include "grem/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace grem {

EnergyOracle::EnergyOracle(const ModelParams& params, EnvironmentHook hook)
    : d_(derive(params)),
      hook_(hook),
      sqrt_a_(std::sqrt(params.a)),
      sqrt_1ma_(std::sqrt(1.0 - params.a)) {}

double EnergyOracle::gaussian(Level level, std::uint64_t index) const {
  const std::uint64_t limit = level == Level::first ? first_level_states() : states();
  if (level != Level::first && level != Level::second) {
    throw std::out_of_range("level must be 1 or 2");
  }
  if (index >= limit) throw std::out_of_range("environment index out of range");
  return normal_icdf(uniform_open(raw_bits(level, index)));
}

}  // namespace grem

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
#include <vector>

#include "grem/energy.hpp"

namespace grem {

inline constexpr int kExactGeneratorMaxN = 12;

struct GeneratorReport {
  std::vector<double> stationary;  // from the assembled rate matrix
  std::vector<double> gibbs;       // e^{beta sqrt(N) Xi} / Z
  double max_relative_error = 0.0;
  std::vector<std::uint64_t> targets;
  std::vector<double> hitting_from_uniform;  // mean hitting time of each target
};

/// Stationary law of the full HRHD generator by GTH state reduction, which keeps
/// entrywise relative accuracy, plus mean hitting times by sparse LU.
/// Throws std::invalid_argument for N > 12.
GeneratorReport exact_generator(const EnergyOracle& oracle,
                                const std::vector<std::uint64_t>& targets = {});

std::vector<double> gibbs_law(const EnergyOracle& oracle);

/// Stationary law of an irreducible rate matrix given row-major off-diagonal
/// rates (the diagonal is ignored).
std::vector<double> gth_stationary(std::vector<double> rates, std::size_t n);

/// Mean hitting time of `target` from every configuration.
std::vector<double> mean_hitting_times(const EnergyOracle& oracle, std::uint64_t target);

/// max over edges of |pi(x) w(x,y) / (pi(y) w(y,x)) - 1| for the Gibbs law.
double max_reversibility_error(const EnergyOracle& oracle);

}  // namespace grem

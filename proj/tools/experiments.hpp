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

#include <string>
#include <vector>

#include "config.hpp"

namespace grem::cli {

struct Outcome {
  json summary;
  json seeds;
  std::vector<std::string> files;  // relative to the output directory
  std::vector<double> replica_seconds;
  bool incomplete = false;
};

/// Runs the configured experiment and writes its data files under c.out.
Outcome run_experiment(const ExperimentConfig& c);

/// Seed of disorder replica r.
std::uint64_t environment_seed(const ExperimentConfig& c, std::size_t r);
/// Seed of trajectory r on the fixed landscape of replica 0.
std::uint64_t dynamics_seed(const ExperimentConfig& c, std::size_t r);

}  // namespace grem::cli

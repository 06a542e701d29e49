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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grem/grem.hpp"

namespace grem::cli {

enum class Experiment {
  params,
  env_topk,
  env_bins,
  thm1,
  gibbs_check,
  simulate,
  occupation,
  visits,
  renewal,
  kproc,
  kemperman,
};

enum class Format { csv, json };

const char* experiment_name(Experiment e);
std::optional<Experiment> parse_experiment(const std::string& name);

struct ExperimentConfig {
  ModelParams model;
  Experiment experiment = Experiment::params;
  std::size_t replicas = 1;

  std::optional<double> L;
  std::optional<double> theta;
  double horizon = 1.0;
  Scale scale = Scale::c;
  std::size_t k = 5;
  std::size_t M = 3;
  std::size_t rank = 1;
  std::size_t visits = 400;
  Engine engine = Engine::aggregated;
  double delta = 0.1;
  double eps = 0.25;
  std::vector<double> gamma;
  std::vector<double> q;
  int n_max = 12;
  bool fine_tune = false;

  std::string out = "grem-out";
  Format format = Format::csv;
  unsigned workers = 1;
  std::uint64_t budget = kDefaultEventBudget;

  /// Threshold in W units: L itself, or the L whose theta(L) equals theta.
  std::optional<double> threshold() const;
};

/// Parses a flat config object, or the "config" member of a run manifest.
/// Throws std::invalid_argument on unknown experiments, missing or mistyped
/// keys and excluded parameter regions.
ExperimentConfig parse_config(const json& j);

/// Cross-field checks that need no computation beyond derived constants.
void validate(const ExperimentConfig& c);

json to_json(const ExperimentConfig& c);

}  // namespace grem::cli

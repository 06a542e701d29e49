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
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grem/counter_rng.hpp"
#include "grem/dynamics.hpp"
#include "grem/stats.hpp"

namespace grem {

/// Finite truncation {gamma_1, ..., gamma_M} of a K-process parameter set.
struct KParams {
  std::vector<double> gamma;
  std::size_t M = 0;
  double total = 0.0;

  static KParams from(std::vector<double> gamma);
};

struct KTrajectoryReport {
  std::vector<double> occupation;
  std::vector<std::uint64_t> visits;
  std::vector<std::uint64_t> arrivals;  // jump-chain targets, self-jumps included
  std::vector<std::vector<double>> durations;  // per state, when recorded
  double horizon = 0.0;
  std::uint64_t jumps = 0;

  double fraction(std::size_t x) const;
};

struct KInit {
  std::optional<std::size_t> state;  // uniform when empty
};

/// Uniform jump chain (the target may equal the current state) with
/// exponential holding of mean gamma_x.
KTrajectoryReport simulate_k(const KParams& params, double horizon, KInit init,
                             CounterStream& rng, bool record_durations = false);

/// gamma_x / sum gamma.
std::vector<double> k_stationary(const KParams& params);

/// Stationary law of the same chain from its generator by a dense solve.
std::vector<double> k_stationary_solve(const KParams& params);

using KObservable = std::function<double(const KParams&)>;

/// Exact long-run occupation of state 1.
double occupation_of_first(const KParams& params);

struct TruncationRow {
  std::size_t M = 0;
  double value = 0.0;
  double drift = 0.0;      // |value - previous value|; 0 on the first row
  double tail_mass = 0.0;  // sum_{i > M} gamma_i
  double tail_ratio = 0.0; // tail_mass / sum_{i <= M} gamma_i
};

std::vector<TruncationRow> truncation_diagnostic(const std::vector<double>& gamma_full,
                                                 const KObservable& observable,
                                                 const std::vector<std::size_t>& levels);

/// Common observables of a rescaled HRHD run or a K-process run.
struct LimitObservables {
  std::vector<double> occupation;              // fractions of the horizon
  std::vector<std::vector<double>> durations;  // rescaled visit lengths per state
  std::vector<std::uint64_t> arrivals;         // jump-chain entries per state
};

LimitObservables observables_of(const KTrajectoryReport& k);

/// Occupation fractions per tracked class, visit lengths divided by the
/// trajectory's scale, and entries into each tracked class.
LimitObservables observables_of(const TrajectoryReport& dyn, std::size_t classes);

struct ComparisonRow {
  std::size_t dyn_state = 0;
  std::size_t k_state = 0;
  double dyn_occupation = 0.0;
  double k_occupation = 0.0;
  double relative_difference = 0.0;  // |dyn - k| / k
  std::optional<FitReport> durations;  // two-sample KS when both sides have visits
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::optional<FitReport> dyn_uniformity;  // jump-chain entries vs uniform
  std::optional<FitReport> k_uniformity;
  double max_relative_difference = 0.0;
};

/// `mapping` pairs dynamics states with K-process states and must cover every
/// K-process state exactly once.
ComparisonReport compare_limit(const LimitObservables& dyn, const LimitObservables& k,
                               const std::vector<std::pair<std::size_t, std::size_t>>& mapping);

}  // namespace grem

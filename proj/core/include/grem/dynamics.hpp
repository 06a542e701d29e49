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

#include "grem/counter_rng.hpp"
#include "grem/energy.hpp"
#include "grem/extremes.hpp"
#include "grem/stats.hpp"

namespace grem {

struct TimeScales {
  double c_N_log = 0.0;      // log c_N^L
  double bar_c_N_log = 0.0;  // log of the ergodic scale below fine tuning
  double L = 0.0;
  double theta = 0.0;  // (1 - p) L / (2 a^{3/2})
  double beta_FT = 0.0;
};

/// Throws std::invalid_argument when a == p and L >= 0.
TimeScales timescales(const DerivedParams& d, double L);

/// beta_FT for (N, p, a) and threshold L; independent of the beta in `m`.
double fine_tuned_beta(const ModelParams& m, double L);

enum class Scale { c, cbar, raw };

std::optional<Scale> parse_scale(const std::string& name);
const char* scale_name(Scale s);
double log_scale(const TimeScales& ts, Scale s);

struct Rates {
  double log_r1 = 0.0;  // per first-level neighbour
  double log_r2 = 0.0;  // per second-level neighbour
  double log_total = 0.0;
  double level1_probability = 0.0;

  double r1() const;
  double r2() const;
  double total() const;
  double mean_holding() const;
};

Rates rates(const EnergyOracle& oracle, std::uint64_t sigma);

/// log mu_N = log(1 + (N2/N1) exp(beta sqrt(aN) xi1)).
double log_mu(const DerivedParams& d, double xi1);

struct DynState {
  std::uint64_t sigma = 0;
  double t = 0.0;
};

struct StepResult {
  DynState state;
  double holding = 0.0;
  Level level = Level::second;
};

StepResult step(const EnergyOracle& oracle, const DynState& state, CounterStream& rng);

struct TrackedClass {
  std::uint64_t rank = 0;  // rank of its best configuration in the extreme list
  std::uint64_t sigma1 = 0;
  std::uint64_t matched_sigma2 = 0;
  double xi1 = 0.0;
  double w = 0.0;
  bool in_I = true;  // w > L
};

/// First-level classes followed by the dynamics. I and J index `classes`,
/// each ordered by increasing W; I[0] is the renewal reference i_1.
struct TrackedSet {
  double L = 0.0;
  std::vector<TrackedClass> classes;
  std::vector<std::size_t> I;
  std::vector<std::size_t> J;

  std::optional<std::size_t> find(std::uint64_t sigma1) const;
  std::size_t size() const { return classes.size(); }
};

/// The first M ranks with W > L and the first M with W < L, from an extreme
/// list sorted by rank. Repeated first-level configurations keep their best rank.
TrackedSet make_tracked(const std::vector<ExtremeRecord>& records, double L, std::size_t M);

/// The first M distinct first-level configurations, all placed in I.
TrackedSet track_top(const std::vector<ExtremeRecord>& records, std::size_t M);

enum class Engine { naive, aggregated };

inline constexpr std::uint64_t kDefaultEventBudget = 1'000'000'000ull;

struct SimulationOptions {
  Engine engine = Engine::aggregated;
  Scale scale = Scale::raw;
  double L = 0.0;
  double horizon = 1.0;  // in units of the chosen scale
  std::uint64_t budget = kDefaultEventBudget;
  bool record_visits = false;
  bool record_renewal = false;
  std::size_t max_jumps = 0;  // tracked-class entry sequence kept up to this length
  std::optional<std::uint64_t> init;  // uniform when empty
};

struct Visit {
  std::size_t cls = 0;
  std::uint64_t index = 0;  // visit number to this class
  double psi = 0.0;        // upsilon + gamma_vis
  double upsilon = 0.0;    // time at the matched second-level state
  double gamma_vis = 0.0;  // remainder
};

/// One excursion between consecutive returns to i_1; F and Q follow
/// TrackedSet::I and TrackedSet::J order.
struct Excursion {
  std::vector<double> F;
  std::vector<double> Q;
  std::vector<std::uint64_t> visits_I;
  std::vector<std::uint64_t> visits_J;
  double R = 0.0;
};

inline constexpr std::int64_t kOtherClass = -1;

struct TrajectoryReport {
  std::vector<double> occupation;  // per tracked class
  double other = 0.0;
  double total_time = 0.0;
  double target_time = 0.0;
  double log_scale = 0.0;
  std::vector<Visit> visits;
  std::vector<Excursion> excursions;
  std::vector<std::int64_t> jumps;  // class entered at each first-level move
  std::uint64_t events = 0;
  std::uint64_t sojourns = 0;
  bool reached_horizon = false;
  double wall_seconds = 0.0;

  bool partial() const { return !reached_horizon; }
  double fraction(std::size_t cls) const;
  double other_fraction() const;
};

TrajectoryReport simulate(const EnergyOracle& oracle, const TrackedSet& tracked,
                          const SimulationOptions& options, CounterStream& rng);

/// Exact mean time of one first-level sojourn in class sigma1 entered at a
/// uniform second-level state: log of (N/N1) 2^{-N2} sum_{sigma2} e^{beta sqrt(N) Xi}.
double log_expected_sojourn(const EnergyOracle& oracle, std::uint64_t sigma1);

struct VisitExperiment {
  std::size_t cls = 0;
  std::vector<Visit> visits;
  std::vector<double> rescaled;  // psi / scale
  double log_scale = 0.0;
  double predicted_mean = 0.0;  // rescaled exact sojourn mean
  Summary psi;                  // of `rescaled`
  FitReport exponential_fit;    // against Exponential(predicted_mean)
  double no_hit_fraction = 0.0;
  double no_hit_se = 0.0;
  double no_hit_predicted = 0.0;
  std::uint64_t events = 0;
  bool partial = false;
};

/// Independent first-level sojourns in class `cls`, each entered at a uniform
/// second-level state.
VisitExperiment visit_experiment(const EnergyOracle& oracle, const TrackedSet& tracked,
                                 std::size_t cls, const TimeScales& ts, Scale scale,
                                 std::size_t replicas, CounterStream& rng,
                                 std::uint64_t budget = kDefaultEventBudget);

inline constexpr std::size_t kMinVisitReplicas = 100;

struct RenewalTerm {
  std::size_t cls = 0;
  RatioEstimate share;       // E[F or Q] / E[R]
  double predicted_share = 0.0;
  Summary visits;            // visits per excursion
  Summary time;              // F or Q per excursion
  double closed_form_mean = 0.0;  // exact E_1 of the same quantity
};

struct RenewalReport {
  std::size_t excursions = 0;
  std::vector<RenewalTerm> I;
  std::vector<RenewalTerm> J;
  Summary R;
  double max_identity_error = 0.0;  // max |R - sum(F + Q)| / R
  TrajectoryReport trajectory;
};

RenewalReport renewal_experiment(const EnergyOracle& oracle, const TrackedSet& tracked,
                                 const SimulationOptions& options, CounterStream& rng);

}  // namespace grem

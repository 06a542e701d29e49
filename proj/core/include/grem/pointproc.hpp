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
#include <vector>

#include "grem/counter_rng.hpp"
#include "grem/extremes.hpp"
#include "grem/params.hpp"
#include "grem/stats.hpp"

namespace grem {

/// Points of a Poisson process with intensity K e^{-x} dx above xmin.
struct PppSample {
  std::vector<double> points;  // strictly decreasing
  double K = 1.0;
  double xmin = -10.0;
};

inline constexpr double kDefaultPppFloor = -10.0;

PppSample sample_ppp(double K, double xmin, CounterStream& rng);

/// gamma_i = exp((beta / beta_star) xi_i). The mapping is always returned;
/// `summable` is false when beta <= beta_star and sums of gamma diverge.
struct GammaPoints {
  std::vector<double> values;  // decreasing
  bool summable = false;
};

GammaPoints to_gamma(const PppSample& sample, const DerivedParams& d);

/// Throws std::domain_error unless beta > beta_star.
void require_summable(const DerivedParams& d);

/// KS against the Gumbel law exp(-K e^{-x}).
FitReport gumbel_fit(const std::vector<double>& samples, double K);

double gumbel_cdf(double x, double K);

enum class ThmCase { a_less_p, a_equal_p };

struct Thm1Report {
  ThmCase which = ThmCase::a_less_p;
  std::size_t replicas = 0;
  double alpha = 0.01;

  FitReport gumbel;  // rank-1 u_inv, K = 1 or 1/2

  Summary w;
  double w_target_variance = 0.0;  // 1 - a
  double w_mean_z = 0.0;           // mean / standard error, against 0
  double w_mean_p = 1.0;           // two-sided
  Interval w_variance_ci;          // at confidence 1 - alpha
  bool w_variance_ok = false;      // CI contains 1 - a
  double w_variance_p = 1.0;       // two-sided chi-square test of variance = 1 - a

  double correlation = 0.0;  // u_inv vs w, rank 1
  double correlation_se = 0.0;
  bool correlation_ok = false;  // |r| <= 3 se

  double negative_fraction = 0.0;
  double sign_p = 1.0;  // one-sided, P[#negative >= observed | fair coin]

  bool gumbel_ok() const { return gumbel.p_value >= alpha; }
  bool mean_ok() const { return w_mean_p >= alpha; }
  bool sign_ok() const { return negative_fraction == 1.0 || sign_p < alpha; }
};

inline constexpr std::size_t kThm1MinReplicas = 30;

Thm1Report thm1_suite(const std::vector<std::vector<ExtremeRecord>>& replicas,
                      const DerivedParams& d, ThmCase which, double alpha = 0.01);

}  // namespace grem

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

#include "grem/params.hpp"

namespace grem {

/// Hypercube dimension n and per-step stopping probability q, with
/// lambda = (n/2) q / (1 - q).
struct KempermanInput {
  int n = 1;
  double q = 0.5;
  double lambda = 0.5;

  static KempermanInput from_q(int n, double q);
  static KempermanInput from_lambda(int n, double lambda);
};

/// Above this dimension the closed form switches to the large-n denominator.
inline constexpr int kKempermanExactMaxN = 60;

/// E[(1 - q)^T] for the hitting time T of a fixed vertex by the simple random
/// walk on {0,1}^n started uniformly, by the Beta-integral sums B_i(lambda).
double kemperman_gf(const KempermanInput& in);

/// Same quantity from the birth-death chain of Hamming distances. n <= 12.
double brute_force_gf(int n, double q);

struct DenominatorReport {
  double exact = 1.0;   // 1 + lambda sum_{i>=1} C(n,i) / (i + lambda)
  double approx = 1.0;  // 1 + lambda 2^{n+1} / n
  double rel_gap = 0.0;      // |exact - approx| / exact
  double sum_exact = 0.0;    // sum_{i>=1} C(n,i) / (i + lambda)
  double sum_approx = 0.0;   // 2^{n+1} / n
  double sum_rel_gap = 0.0;  // |sum_exact - sum_approx| / sum_exact
};

DenominatorReport denominator_asymptotic(int n, double lambda);

/// Stopping parameter of a first-level sojourn at first-level field xi1.
KempermanInput sojourn_input(const DerivedParams& d, double xi1);

/// Probability that a first-level sojourn started from a uniform second-level
/// state ends before it reaches a given second-level vertex.
double no_hit(const DerivedParams& d, double xi1);

}  // namespace grem

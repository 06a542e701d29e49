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

namespace grem {

/// Model parameters of the two-level GREM and its hopping dynamics.
struct ModelParams {
  int N = 0;          ///< number of spins
  double p = 0.5;     ///< fraction of spins in the first level
  double a = 0.2;     ///< weight of the first level
  double beta = 1.0;  ///< inverse temperature
  std::uint64_t seed = 0;
};

/// Constants and flags that follow from ModelParams.
struct DerivedParams {
  ModelParams model;
  int N1 = 0;
  int N2 = 0;
  double beta_star = 0.0;    // sqrt(2 ln 2)
  double kappa = 0.0;        // ln ln 2 + ln 4 pi
  double bar_beta_FT = 0.0;  // (1 - p) beta_star / (2 a)
  double alpha = 0.0;        // beta_star / beta
  bool low_temp = false;     // beta > beta_star
  bool ft_visible = false;   // bar_beta_FT > beta_star

  double sqrtN() const;
  /// sqrt(a N) * beta_star, the centring of the first-level field.
  double xi1_center() const;
};

inline constexpr int kMaxSpins = 62;

/// N1 = floor(p N). A relative slack of 1e-9 absorbs representation error
/// in p (0.29 * 100 must give 29).
int first_level_size(int N, double p);

/// Validates and derives. Throws std::invalid_argument on a > p (cascading
/// regime), empty levels, or out-of-range values.
DerivedParams derive(const ModelParams& params);

/// Affine scale for the maximum of 2^N standard Gaussians:
///   u_N(x) = x / (b sqrt N) + b sqrt N - (ln N + kappa) / (2 b sqrt N).
double u_scale(const DerivedParams& d, double x);
/// Exact algebraic inverse of u_scale.
double u_unscale(const DerivedParams& d, double y);

struct LogWeight {
  double log_value = 0.0;
  double value = 1.0;  // exp(log_value); +inf when it overflows
};

/// gamma = exp((beta / beta_star) * u_inv), carried in log space.
LogWeight gamma_weight(const DerivedParams& d, double u_inv);

}  // namespace grem

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

#include "grem/params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace grem {

double DerivedParams::sqrtN() const { return std::sqrt(static_cast<double>(model.N)); }

double DerivedParams::xi1_center() const {
  return std::sqrt(model.a * static_cast<double>(model.N)) * beta_star;
}

int first_level_size(int N, double p) {
  return static_cast<int>(std::floor(p * static_cast<double>(N) * (1.0 + 1e-9)));
}

DerivedParams derive(const ModelParams& params) {
  if (params.N < 2 || params.N > kMaxSpins) {
    throw std::invalid_argument("N must lie in [2, " + std::to_string(kMaxSpins) + "]");
  }
  if (!(params.p > 0.0 && params.p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  if (!(params.a > 0.0 && params.a <= 1.0)) throw std::invalid_argument("a must lie in (0, 1]");
  if (!(params.beta > 0.0) || !std::isfinite(params.beta)) {
    throw std::invalid_argument("beta must be positive");
  }
  if (params.a > params.p) throw std::invalid_argument("cascading regime unsupported (a > p)");

  DerivedParams d;
  d.model = params;
  d.N1 = first_level_size(params.N, params.p);
  d.N2 = params.N - d.N1;
  if (d.N1 < 1 || d.N2 < 1) {
    throw std::invalid_argument("both levels need at least one spin (N1 = floor(pN), N2 = N - N1)");
  }
  d.beta_star = std::sqrt(2.0 * std::numbers::ln2);
  d.kappa = std::log(std::numbers::ln2) + std::log(4.0 * std::numbers::pi);
  d.bar_beta_FT = (1.0 - params.p) * d.beta_star / (2.0 * params.a);
  d.alpha = d.beta_star / params.beta;
  d.low_temp = params.beta > d.beta_star;
  d.ft_visible = d.bar_beta_FT > d.beta_star;
  return d;
}

double u_scale(const DerivedParams& d, double x) {
  const double s = d.beta_star * d.sqrtN();
  const double logN = std::log(static_cast<double>(d.model.N));
  return x / s + s - (logN + d.kappa) / (2.0 * s);
}

double u_unscale(const DerivedParams& d, double y) {
  const double s = d.beta_star * d.sqrtN();
  const double logN = std::log(static_cast<double>(d.model.N));
  return s * (y - s + (logN + d.kappa) / (2.0 * s));
}

LogWeight gamma_weight(const DerivedParams& d, double u_inv) {
  LogWeight w;
  w.log_value = (d.model.beta / d.beta_star) * u_inv;
  w.value = std::exp(w.log_value);
  return w;
}

}  // namespace grem

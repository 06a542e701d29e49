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

#include "grem/hitting.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace grem {
namespace {

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_add(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(-std::fabs(x - y)));
}

// log B_i(lambda) = log sum_j C(n-i, j) Gamma(i+1) Gamma(lambda+j) / Gamma(lambda+i+j+1)
double log_b(int n, int i, double lambda) {
  double acc = -std::numeric_limits<double>::infinity();
  const double lg_i = std::lgamma(i + 1.0);
  for (int j = 0; j <= n - i; ++j) {
    acc = log_add(acc, log_choose(n - i, j) + lg_i + std::lgamma(lambda + j) -
                           std::lgamma(lambda + i + j + 1.0));
  }
  return acc;
}

void check_dimension(int n) {
  if (n < 1) throw std::invalid_argument("hypercube dimension must be at least 1");
}

}  // namespace

KempermanInput KempermanInput::from_q(int n, double q) {
  check_dimension(n);
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in (0, 1]");
  KempermanInput in;
  in.n = n;
  in.q = q;
  in.lambda = q < 1.0 ? 0.5 * n * q / (1.0 - q) : std::numeric_limits<double>::infinity();
  return in;
}

KempermanInput KempermanInput::from_lambda(int n, double lambda) {
  check_dimension(n);
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  KempermanInput in;
  in.n = n;
  in.lambda = lambda;
  in.q = std::isinf(lambda) ? 1.0 : lambda / (lambda + 0.5 * n);
  return in;
}

double kemperman_gf(const KempermanInput& in) {
  check_dimension(in.n);
  if (!(in.q > 0.0 && in.q <= 1.0)) throw std::invalid_argument("q must lie in (0, 1]");
  if (std::isinf(in.lambda) || in.q == 1.0) return std::ldexp(1.0, -in.n);
  if (in.n > kKempermanExactMaxN) {
    const auto den = denominator_asymptotic(in.n, in.lambda);
    return 1.0 / den.approx;
  }
  const int n = in.n;
  double log_num = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) log_num = log_add(log_num, log_choose(n, i) + log_b(n, i, in.lambda));
  log_num -= n * std::numbers::ln2;
  return std::min(1.0, std::exp(log_num - log_b(n, 0, in.lambda)));
}

double brute_force_gf(int n, double q) {
  check_dimension(n);
  if (n > 12) throw std::invalid_argument("brute_force_gf supports n <= 12");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in (0, 1)");
  // Unknowns h(1..n); h(0) = 1 moves to the right-hand side. Thomas algorithm.
  const double s = 1.0 - q;
  const double dn = n;
  std::vector<double> lower(n + 1), diag(n + 1), upper(n + 1), rhs(n + 1);
  for (int d = 1; d <= n; ++d) {
    lower[d] = -s * d / dn;
    diag[d] = 1.0;
    upper[d] = -s * (n - d) / dn;
    rhs[d] = 0.0;
  }
  rhs[1] -= lower[1];
  lower[1] = 0.0;
  for (int d = 2; d <= n; ++d) {
    const double m = lower[d] / diag[d - 1];
    diag[d] -= m * upper[d - 1];
    rhs[d] -= m * rhs[d - 1];
  }
  std::vector<double> h(n + 1);
  h[0] = 1.0;
  h[n] = rhs[n] / diag[n];
  for (int d = n - 1; d >= 1; --d) h[d] = (rhs[d] - upper[d] * h[d + 1]) / diag[d];
  double acc = 0.0;
  for (int d = 0; d <= n; ++d) acc += std::exp(log_choose(n, d) - n * std::numbers::ln2) * h[d];
  return acc;
}

DenominatorReport denominator_asymptotic(int n, double lambda) {
  check_dimension(n);
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  DenominatorReport r;
  double log_sum = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= n; ++i) log_sum = log_add(log_sum, log_choose(n, i) - std::log(i + lambda));
  r.sum_exact = std::exp(log_sum);
  r.sum_approx = std::ldexp(2.0 / n, n);
  r.exact = 1.0 + lambda * r.sum_exact;
  r.approx = 1.0 + lambda * r.sum_approx;
  r.rel_gap = std::fabs(r.exact - r.approx) / r.exact;
  r.sum_rel_gap = std::fabs(r.sum_exact - r.sum_approx) / r.sum_exact;
  return r;
}

KempermanInput sojourn_input(const DerivedParams& d, double xi1) {
  const double lam = 0.5 * d.N1 *
                     std::exp(-d.model.beta * std::sqrt(d.model.a * d.model.N) * xi1);
  return KempermanInput::from_lambda(d.N2, lam);
}

double no_hit(const DerivedParams& d, double xi1) {
  const double lam = 0.5 * d.N1 *
                     std::exp(-d.model.beta * std::sqrt(d.model.a * d.model.N) * xi1);
  if (lam == 0.0) return 0.0;
  return 1.0 - kemperman_gf(KempermanInput::from_lambda(d.N2, lam));
}

}  // namespace grem

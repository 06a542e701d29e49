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

#include "grem/generator.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "grem/dynamics.hpp"

namespace grem {
namespace {

void check_size(const EnergyOracle& oracle) {
  if (oracle.derived().model.N > kExactGeneratorMaxN) {
    throw std::invalid_argument("exact generator supports N <= 12");
  }
}

template <typename Edge>
void for_each_edge(const EnergyOracle& oracle, Edge&& edge) {
  const auto& d = oracle.derived();
  const std::uint64_t n = oracle.states();
  for (std::uint64_t x = 0; x < n; ++x) {
    const auto r = rates(oracle, x);
    for (int b = 0; b < d.model.N; ++b) {
      const std::uint64_t y = x ^ (std::uint64_t{1} << b);
      edge(x, y, b >= d.N2 ? r.log_r1 : r.log_r2);
    }
  }
}

}  // namespace

std::vector<double> gibbs_law(const EnergyOracle& oracle) {
  const std::uint64_t n = oracle.states();
  const double b = oracle.params().beta * oracle.derived().sqrtN();
  std::vector<double> logw(n);
  for (std::uint64_t x = 0; x < n; ++x) logw[x] = b * oracle.xi(x);
  const double peak = *std::max_element(logw.begin(), logw.end());
  double z = 0.0;
  for (double& v : logw) {
    v = std::exp(v - peak);
    z += v;
  }
  for (double& v : logw) v /= z;
  return logw;
}

std::vector<double> gth_stationary(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n || n == 0) throw std::invalid_argument("rate matrix shape mismatch");
  std::vector<double> s(n, 0.0);
  for (std::size_t k = n - 1; k >= 1; --k) {
    const double* row_k = &a[k * n];
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += row_k[j];
    if (!(sum > 0.0)) throw std::runtime_error("rate matrix is reducible");
    s[k] = sum;
    for (std::size_t i = 0; i < k; ++i) {
      double* row_i = &a[i * n];
      const double f = row_i[k] / sum;
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) row_i[j] += f * row_k[j];
    }
  }
  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  double total = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += pi[i] * a[i * n + k];
    pi[k] = acc / s[k];
    total += pi[k];
  }
  for (double& v : pi) v /= total;
  return pi;
}

std::vector<double> mean_hitting_times(const EnergyOracle& oracle, std::uint64_t target) {
  check_size(oracle);
  const std::uint64_t n = oracle.states();
  if (target >= n) throw std::invalid_argument("target out of range");
  auto idx = [target](std::uint64_t x) { return static_cast<Eigen::Index>(x < target ? x : x - 1); };
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> out_rate(n, 0.0);
  for_each_edge(oracle, [&](std::uint64_t x, std::uint64_t y, double log_rate) {
    if (x == target) return;
    const double w = std::exp(log_rate);
    out_rate[x] += w;
    if (y != target) trip.emplace_back(idx(x), idx(y), -w);
  });
  for (std::uint64_t x = 0; x < n; ++x) {
    if (x != target) trip.emplace_back(idx(x), idx(x), out_rate[x]);
  }
  const auto m = static_cast<Eigen::Index>(n - 1);
  Eigen::SparseMatrix<double> A(m, m);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw std::runtime_error("hitting-time system is singular");
  const Eigen::VectorXd h = lu.solve(Eigen::VectorXd::Ones(m));
  std::vector<double> out(n, 0.0);
  for (std::uint64_t x = 0; x < n; ++x) {
    if (x != target) out[x] = h[idx(x)];
  }
  return out;
}

GeneratorReport exact_generator(const EnergyOracle& oracle, const std::vector<std::uint64_t>& targets) {
  check_size(oracle);
  const std::uint64_t n = oracle.states();
  std::vector<double> q(n * n, 0.0);
  for_each_edge(oracle, [&](std::uint64_t x, std::uint64_t y, double log_rate) {
    q[x * n + y] = std::exp(log_rate);
  });
  GeneratorReport rep;
  rep.stationary = gth_stationary(std::move(q), n);
  rep.gibbs = gibbs_law(oracle);
  for (std::uint64_t x = 0; x < n; ++x) {
    rep.max_relative_error = std::max(rep.max_relative_error,
                                      std::fabs(rep.stationary[x] - rep.gibbs[x]) / rep.gibbs[x]);
  }
  rep.targets = targets;
  for (std::uint64_t t : targets) {
    const auto h = mean_hitting_times(oracle, t);
    double acc = 0.0;
    for (double v : h) acc += v;
    rep.hitting_from_uniform.push_back(acc / static_cast<double>(n));
  }
  return rep;
}

double max_reversibility_error(const EnergyOracle& oracle) {
  const double b = oracle.params().beta * oracle.derived().sqrtN();
  const auto& d = oracle.derived();
  double worst = 0.0;
  for_each_edge(oracle, [&](std::uint64_t x, std::uint64_t y, double log_rate) {
    if (y < x) return;
    const auto back = rates(oracle, y);
    const double log_back = (x ^ y) >> d.N2 ? back.log_r1 : back.log_r2;
    const double diff = (b * oracle.xi(x) + log_rate) - (b * oracle.xi(y) + log_back);
    worst = std::max(worst, std::fabs(std::expm1(diff)));
  });
  return worst;
}

}  // namespace grem

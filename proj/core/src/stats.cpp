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

#include "grem/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace grem {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  if (lambda < 1.18) {
    // Jacobi form converges fast for small arguments.
    const double t = pi2 / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 9; k += 2) cdf += std::exp(-static_cast<double>(k * k) * t);
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_p_value(double d, double effective_n) {
  const double rn = std::sqrt(effective_n);
  return kolmogorov_survival(d * (rn + 0.12 + 0.11 / rn));
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

FitReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf,
                  std::string target) {
  FitReport r;
  r.n = samples.size();
  r.statistic = ks_statistic(std::move(samples), cdf);
  r.p_value = ks_p_value(r.statistic, static_cast<double>(r.n));
  r.target = std::move(target);
  return r;
}

FitReport ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("empty sample");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  FitReport r;
  r.statistic = d;
  r.n = x.size() + y.size();
  r.p_value = ks_p_value(d, nx * ny / (nx + ny));
  r.target = "two-sample";
  return r;
}

FitReport ks_exponential(std::vector<double> samples, double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("exponential mean must be positive");
  return ks_test(std::move(samples), [mean](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x / mean); },
                 "exponential(mean=" + std::to_string(mean) + ")");
}

double chi_square_survival(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), x));
}

double chi_square_quantile(double prob, double dof) {
  return boost::math::quantile(boost::math::chi_squared(dof), prob);
}

FitReport chi_square_gof(const std::vector<double>& observed, const std::vector<double>& probs) {
  if (observed.size() != probs.size() || observed.size() < 2) {
    throw std::invalid_argument("chi-square needs matching cells, at least two");
  }
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  const double mass = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (!(total > 0.0) || !(mass > 0.0)) throw std::invalid_argument("empty chi-square table");
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * probs[i] / mass;
    if (e <= 0.0) throw std::invalid_argument("chi-square cell with zero expectation");
    stat += (observed[i] - e) * (observed[i] - e) / e;
  }
  FitReport r;
  r.statistic = stat;
  r.n = static_cast<std::size_t>(total);
  r.p_value = chi_square_survival(stat, static_cast<double>(observed.size() - 1));
  r.target = "chi-square(" + std::to_string(observed.size() - 1) + ")";
  return r;
}

double binomial_upper_tail(std::size_t k, std::size_t n, double prob) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  const boost::math::binomial dist(static_cast<double>(n), prob);
  return boost::math::cdf(boost::math::complement(dist, static_cast<double>(k - 1)));
}

double Summary::std_error() const {
  return n > 0 ? std::sqrt(variance / static_cast<double>(n)) : 0.0;
}

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.n = xs.size();
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.variance = ss / static_cast<double>(s.n - 1);
  }
  return s;
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("correlation needs paired samples");
  const auto sx = summarize(x);
  const auto sy = summarize(y);
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - sx.mean) * (y[i] - sy.mean);
  sxy /= static_cast<double>(x.size() - 1);
  return sxy / std::sqrt(sx.variance * sy.variance);
}

double correlation_std_error(double r, std::size_t n) {
  if (n <= 2) return std::numeric_limits<double>::infinity();
  return std::sqrt(std::max(0.0, 1.0 - r * r) / static_cast<double>(n - 2));
}

Interval variance_interval(const Summary& s, double confidence) {
  if (s.n < 2) throw std::invalid_argument("variance interval needs two samples");
  const double dof = static_cast<double>(s.n - 1);
  const double tail = 0.5 * (1.0 - confidence);
  return {dof * s.variance / chi_square_quantile(1.0 - tail, dof),
          dof * s.variance / chi_square_quantile(tail, dof)};
}

RatioEstimate ratio_of_means(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ratio needs paired samples");
  const auto sx = summarize(x);
  const auto sy = summarize(y);
  RatioEstimate r;
  r.value = sx.mean / sy.mean;
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = x[i] - r.value * y[i];
    acc += z * z;
  }
  const double n = static_cast<double>(x.size());
  r.std_error = std::sqrt(acc / (n - 1.0) / n) / std::fabs(sy.mean);
  return r;
}

}  // namespace grem

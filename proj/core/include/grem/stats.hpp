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
#include <functional>
#include <string>
#include <vector>

namespace grem {

/// Goodness-of-fit outcome against a declared reference law.
struct FitReport {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  std::string target;
};

double normal_cdf(double x);

/// P[K > lambda] for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// Asymptotic p-value of a KS distance with the Stephens finite-n correction.
double ks_p_value(double d, double effective_n);

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

FitReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf,
                  std::string target);

FitReport ks_two_sample(std::vector<double> x, std::vector<double> y);

FitReport ks_exponential(std::vector<double> samples, double mean);

double chi_square_survival(double x, double dof);
double chi_square_quantile(double prob, double dof);

/// Pearson chi-square of counts against cell probabilities (renormalised).
FitReport chi_square_gof(const std::vector<double>& observed, const std::vector<double>& probs);

/// P[X >= k] for X ~ Binomial(n, prob).
double binomial_upper_tail(std::size_t k, std::size_t n, double prob);

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error() const;
};

Summary summarize(const std::vector<double>& xs);

double correlation(const std::vector<double>& x, const std::vector<double>& y);

/// Standard error of a sample correlation r from n pairs: sqrt((1 - r^2)/(n - 2)).
double correlation_std_error(double r, std::size_t n);

/// Two-sided chi-square confidence interval for a normal variance.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

Interval variance_interval(const Summary& s, double confidence);

/// Ratio of means mean(x)/mean(y) over paired samples, with delta-method error.
struct RatioEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

RatioEstimate ratio_of_means(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace grem

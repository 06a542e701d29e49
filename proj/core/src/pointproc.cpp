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

#include "grem/pointproc.hpp"

#include <cmath>
#include <stdexcept>

namespace grem {

PppSample sample_ppp(double K, double xmin, CounterStream& rng) {
  if (!(K > 0.0)) throw std::invalid_argument("PPP intensity K must be positive");
  PppSample s;
  s.K = K;
  s.xmin = xmin;
  double arrival = 0.0;
  for (;;) {
    arrival += rng.exponential(1.0);
    const double x = -std::log(arrival / K);
    if (!(x > xmin)) break;
    s.points.push_back(x);
  }
  return s;
}

GammaPoints to_gamma(const PppSample& sample, const DerivedParams& d) {
  GammaPoints g;
  g.summable = d.low_temp;
  const double ratio = d.model.beta / d.beta_star;
  g.values.reserve(sample.points.size());
  for (double x : sample.points) g.values.push_back(std::exp(ratio * x));
  return g;
}

void require_summable(const DerivedParams& d) {
  if (!d.low_temp) throw std::domain_error("gamma weights are not summable for beta <= beta_star");
}

double gumbel_cdf(double x, double K) { return std::exp(-K * std::exp(-x)); }

FitReport gumbel_fit(const std::vector<double>& samples, double K) {
  if (samples.empty()) throw std::invalid_argument("empty sample");
  if (!(K > 0.0)) throw std::invalid_argument("Gumbel K must be positive");
  return ks_test(samples, [K](double x) { return gumbel_cdf(x, K); },
                 "gumbel(K=" + std::to_string(K) + ")");
}

Thm1Report thm1_suite(const std::vector<std::vector<ExtremeRecord>>& replicas,
                      const DerivedParams& d, ThmCase which, double alpha) {
  if (replicas.size() < kThm1MinReplicas) {
    throw std::invalid_argument("thm1_suite needs at least 30 replicas");
  }
  std::vector<double> u;
  std::vector<double> w;
  u.reserve(replicas.size());
  w.reserve(replicas.size());
  for (const auto& recs : replicas) {
    if (recs.empty()) throw std::invalid_argument("replica without records");
    u.push_back(recs.front().u_inv);
    w.push_back(recs.front().w);
  }

  Thm1Report r;
  r.which = which;
  r.replicas = replicas.size();
  r.alpha = alpha;
  r.gumbel = gumbel_fit(u, which == ThmCase::a_less_p ? 1.0 : 0.5);

  r.w = summarize(w);
  r.w_target_variance = 1.0 - d.model.a;
  r.w_mean_z = r.w.mean / r.w.std_error();
  r.w_mean_p = std::erfc(std::fabs(r.w_mean_z) / std::sqrt(2.0));
  r.w_variance_ci = variance_interval(r.w, 1.0 - alpha);
  r.w_variance_ok = r.w_variance_ci.contains(r.w_target_variance);
  const double dof = static_cast<double>(r.w.n - 1);
  const double stat = dof * r.w.variance / r.w_target_variance;
  const double upper = chi_square_survival(stat, dof);
  r.w_variance_p = std::min(1.0, 2.0 * std::min(upper, 1.0 - upper));

  r.correlation = correlation(u, w);
  r.correlation_se = correlation_std_error(r.correlation, u.size());
  r.correlation_ok = std::fabs(r.correlation) <= 3.0 * r.correlation_se;

  std::size_t negative = 0;
  for (double x : w) negative += x < 0.0 ? 1 : 0;
  r.negative_fraction = static_cast<double>(negative) / static_cast<double>(w.size());
  r.sign_p = binomial_upper_tail(negative, w.size(), 0.5);
  return r;
}

}  // namespace grem

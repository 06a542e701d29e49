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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "helpers.hpp"

using namespace grem;

namespace {

std::size_t count_above(const PppSample& s, double x) {
  std::size_t c = 0;
  for (double v : s.points) c += v > x ? 1 : 0;
  return c;
}

double poisson_pmf(int k, double mean) { return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0)); }

// Replicas with independent Gumbel u_inv and Gaussian w.
std::vector<std::vector<ExtremeRecord>> synthetic(std::size_t n, double K, double w_sd, double w_shift,
                                                  std::uint64_t seed) {
  CounterStream rng(seed);
  std::vector<std::vector<ExtremeRecord>> out(n);
  for (auto& rep : out) {
    ExtremeRecord r;
    r.rank = 1;
    r.u_inv = -std::log(-std::log(rng.uniform()) / K);
    r.w = w_shift + w_sd * rng.normal();
    rep.push_back(r);
  }
  return out;
}

}  // namespace

TEST_SUITE("pointproc") {
  TEST_CASE("points are decreasing and above the floor") {
    auto rng = test::stream(1);
    const auto s = sample_ppp(1.0, -5.0, rng);
    REQUIRE(!s.points.empty());
    for (std::size_t i = 1; i < s.points.size(); ++i) CHECK(s.points[i] < s.points[i - 1]);
    CHECK(s.points.back() > -5.0);
    CHECK_THROWS_AS(sample_ppp(0.0, -5.0, rng), std::invalid_argument);
  }

  TEST_CASE("void probability above zero") {
    const int reps = 20000;
    int empty = 0;
    for (int r = 0; r < reps; ++r) {
      auto rng = test::stream(100 + static_cast<std::uint64_t>(r));
      empty += count_above(sample_ppp(1.0, 0.0, rng), 0.0) == 0 ? 1 : 0;
    }
    const double p = std::exp(-1.0);
    CHECK(std::fabs(empty / static_cast<double>(reps) - p) < 4 * std::sqrt(p * (1 - p) / reps));
  }

  TEST_CASE("counts above a level are Poisson") {
    const int reps = 4000;
    for (double x : {-1.0, 0.5, 1.5}) {
      const double mean = 2.0 * std::exp(-x);
      const int cells = 12;
      std::vector<double> observed(cells, 0.0);
      std::vector<double> probs(cells, 0.0);
      for (int r = 0; r < reps; ++r) {
        auto rng = test::stream(50000 + static_cast<std::uint64_t>(r));
        const auto c = static_cast<int>(count_above(sample_ppp(2.0, -3.0, rng), x));
        observed[static_cast<std::size_t>(std::min(c, cells - 1))] += 1.0;
      }
      double tail = 1.0;
      for (int k = 0; k < cells - 1; ++k) {
        probs[static_cast<std::size_t>(k)] = poisson_pmf(k, mean);
        tail -= probs[static_cast<std::size_t>(k)];
      }
      probs[cells - 1] = std::max(tail, 0.0);
      // Merge sparse top cells until every expected count is at least 5.
      while (probs.size() > 2 && probs.back() * reps < 5.0) {
        probs[probs.size() - 2] += probs.back();
        observed[observed.size() - 2] += observed.back();
        probs.pop_back();
        observed.pop_back();
      }
      CHECK(chi_square_gof(observed, probs).p_value > 1e-3);
    }
  }

  TEST_CASE("gamma images") {
    const auto d = derive(test::params(20, 1.8));
    auto rng = test::stream(2);
    const auto s = sample_ppp(1.0, kDefaultPppFloor, rng);
    const auto g = to_gamma(s, d);
    CHECK(g.summable);
    REQUIRE(g.values.size() == s.points.size());
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      CHECK(std::log(g.values[i]) == doctest::Approx(d.model.beta / d.beta_star * s.points[i]));
      if (i > 0) CHECK(g.values[i] < g.values[i - 1]);
    }
    const auto hot = derive(test::params(20, 0.9));
    CHECK_FALSE(to_gamma(s, hot).summable);
    CHECK_THROWS_AS(require_summable(hot), std::domain_error);
    CHECK_NOTHROW(require_summable(d));
  }

  TEST_CASE("gamma counts above y have mean y^-alpha") {
    const auto d = derive(test::params(20, 2.0));
    const double y = 1.5;
    const int reps = 5000;
    double total = 0.0;
    for (int r = 0; r < reps; ++r) {
      auto rng = test::stream(9000 + static_cast<std::uint64_t>(r));
      for (double v : to_gamma(sample_ppp(1.0, -4.0, rng), d).values) total += v > y ? 1.0 : 0.0;
    }
    const double mean = std::pow(y, -d.alpha);
    CHECK(std::fabs(total / reps - mean) < 4 * std::sqrt(mean / reps));
  }

  TEST_CASE("gumbel") {
    CHECK(gumbel_cdf(0.0, 1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(gumbel_cdf(std::log(0.5), 0.5) == doctest::Approx(std::exp(-1.0)));
    for (double x = -3.0; x < 5.0; x += 0.5) CHECK(gumbel_cdf(x + 0.5, 1.0) > gumbel_cdf(x, 1.0));
    CHECK_THROWS(gumbel_fit({}, 1.0));

    std::vector<double> maxima;
    for (int r = 0; r < 3000; ++r) {
      auto rng = test::stream(70000 + static_cast<std::uint64_t>(r));
      maxima.push_back(sample_ppp(1.0, kDefaultPppFloor, rng).points.front());
    }
    CHECK(gumbel_fit(maxima, 1.0).p_value > 0.01);
    std::vector<double> shifted = maxima;
    for (auto& x : shifted) x += 1.0;
    const auto off = gumbel_fit(shifted, 1.0);
    CHECK(off.statistic >= 0.3);
    CHECK(off.p_value < 1e-10);
  }

  TEST_CASE("thm1 suite on synthetic null replicas") {
    const auto d = derive(test::params(20));
    const auto reps = synthetic(600, 1.0, std::sqrt(0.8), 0.0, 21);
    const auto r = thm1_suite(reps, d, ThmCase::a_less_p);
    CHECK(r.replicas == 600);
    CHECK(r.gumbel_ok());
    CHECK(r.mean_ok());
    CHECK(r.w_variance_ok);
    CHECK(r.w_target_variance == doctest::Approx(0.8));
    CHECK(r.correlation_ok);
    CHECK(r.negative_fraction == doctest::Approx(0.5).epsilon(0.2));

    const auto wide = thm1_suite(synthetic(600, 1.0, 2.0, 0.0, 22), d, ThmCase::a_less_p);
    CHECK_FALSE(wide.w_variance_ok);
    CHECK(wide.w_variance_p < 1e-6);
  }

  TEST_CASE("thm1 suite in the boundary case") {
    const auto d = derive(test::params(20, 1.3, 1, 0.5, 0.5));
    const auto r = thm1_suite(synthetic(400, 0.5, 1.0, -3.0, 23), d, ThmCase::a_equal_p);
    CHECK(r.gumbel_ok());
    CHECK(r.sign_ok());
    CHECK(r.gumbel.target.find("0.5") != std::string::npos);
    const auto fair = thm1_suite(synthetic(400, 0.5, 1.0, 0.0, 24), d, ThmCase::a_equal_p);
    CHECK_FALSE(fair.sign_ok());
  }

  TEST_CASE("thm1 suite rejects small or empty input") {
    const auto d = derive(test::params(20));
    CHECK_THROWS_AS(thm1_suite(synthetic(29, 1.0, 1.0, 0.0, 1), d, ThmCase::a_less_p), std::invalid_argument);
    auto reps = synthetic(40, 1.0, 1.0, 0.0, 1);
    reps[3].clear();
    CHECK_THROWS_AS(thm1_suite(reps, d, ThmCase::a_less_p), std::invalid_argument);
  }

  TEST_CASE("thm1 suite ignores replica order") {
    const auto d = derive(test::params(20));
    auto reps = synthetic(100, 1.0, 1.0, 0.0, 31);
    const auto a = thm1_suite(reps, d, ThmCase::a_less_p);
    std::reverse(reps.begin(), reps.end());
    const auto b = thm1_suite(reps, d, ThmCase::a_less_p);
    CHECK(a.gumbel.statistic == doctest::Approx(b.gumbel.statistic).epsilon(1e-14));
    CHECK(a.correlation == doctest::Approx(b.correlation).epsilon(1e-12));
    CHECK(a.w.variance == doctest::Approx(b.w.variance).epsilon(1e-12));
  }
}

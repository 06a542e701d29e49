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

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"

using namespace grem;

namespace {

TrackedSet tracked_for(const EnergyOracle& o, double L, std::size_t M) {
  return make_tracked(top_k(o, 4 * M + 8), L, M);
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("zero environment rates") {
    const EnergyOracle o(test::params(10), EnvironmentHook::zero_environment);
    for (std::uint64_t s : {0ull, 17ull, 1023ull}) {
      const auto r = rates(o, s);
      CHECK(r.r1() == doctest::Approx(0.1));
      CHECK(r.r2() == doctest::Approx(0.1));
      CHECK(r.total() == doctest::Approx(1.0));
      CHECK(r.mean_holding() == doctest::Approx(1.0));
      CHECK(r.level1_probability == doctest::Approx(0.5));
    }
  }

  TEST_CASE("exit rate and level choice") {
    const EnergyOracle o(test::params(14, 1.7, 3));
    const auto& d = o.derived();
    for (std::uint64_t s = 0; s < o.states(); s += 997) {
      const auto r = rates(o, s);
      const auto e = o.energies(s);
      const double r1 = std::exp(-d.model.beta * std::sqrt(14.0) * e.xi) / 14.0;
      const double r2 = std::exp(-d.model.beta * std::sqrt(0.8 * 14.0) * e.xi2) / 14.0;
      CHECK(r.r1() == doctest::Approx(r1).epsilon(1e-12));
      CHECK(r.r2() == doctest::Approx(r2).epsilon(1e-12));
      CHECK(r.total() == doctest::Approx(d.N1 * r1 + d.N2 * r2).epsilon(1e-12));
      CHECK(r.mean_holding() * r.total() == doctest::Approx(1.0));
      CHECK(r.level1_probability == doctest::Approx(std::exp(-log_mu(d, e.xi1))).epsilon(1e-12));
    }
  }

  TEST_CASE("step samples the declared holding law and move split") {
    const EnergyOracle o(test::params(12, 1.1, 5));
    const std::uint64_t sigma = 1234;
    const auto r = rates(o, sigma);
    auto rng = test::stream(3);
    const int n = 100000;
    double sum = 0.0;
    int first = 0;
    for (int i = 0; i < n; ++i) {
      const auto s = step(o, {sigma, 2.0}, rng);
      sum += s.holding;
      CHECK(s.state.t == doctest::Approx(2.0 + s.holding));
      const std::uint64_t diff = s.state.sigma ^ sigma;
      CHECK(std::popcount(diff) == 1);
      const bool upper = o.sigma1_of(s.state.sigma) != o.sigma1_of(sigma);
      CHECK(upper == (s.level == Level::first));
      first += upper ? 1 : 0;
    }
    const double m = r.mean_holding();
    CHECK(std::fabs(sum / n - m) < 4.0 * m / std::sqrt(static_cast<double>(n)));
    const double q = r.level1_probability;
    CHECK(std::fabs(first / static_cast<double>(n) - q) < 4.0 * std::sqrt(q * (1 - q) / n) + 1e-12);
  }

  TEST_CASE("time scales") {
    const auto d = derive(test::params(20, 1.4));
    const auto t0 = timescales(d, 0.0);
    const auto t1 = timescales(d, 1.0);
    CHECK(t1.theta == doctest::Approx(2.795085).epsilon(1e-6));
    CHECK(t0.theta == 0.0);
    CHECK(t0.beta_FT == doctest::Approx(d.bar_beta_FT));
    CHECK(t1.beta_FT == doctest::Approx(d.bar_beta_FT - t1.theta / std::sqrt(20.0)));
    CHECK(fine_tuned_beta(test::params(20, 9.0), 1.0) == doctest::Approx(t1.beta_FT));
    CHECK(t0.c_N_log - t1.c_N_log == doctest::Approx(1.4 * std::sqrt(0.2 * 20)));
    CHECK(t1.bar_c_N_log == t0.bar_c_N_log);
    const double extreme = 1.4 * (d.beta_star * 20 - (std::log(20.0) + d.kappa) / (2 * d.beta_star));
    CHECK(t0.bar_c_N_log == doctest::Approx(extreme - d.N2 * std::log(2.0)));
    CHECK(log_scale(t1, Scale::c) == t1.c_N_log);
    CHECK(log_scale(t1, Scale::cbar) == t1.bar_c_N_log);
    CHECK(log_scale(t1, Scale::raw) == 0.0);
    const auto boundary = derive(test::params(20, 1.4, 1, 0.5, 0.5));
    CHECK_THROWS_AS(timescales(boundary, 0.0), std::invalid_argument);
    CHECK_NOTHROW(timescales(boundary, -0.5));
  }

  TEST_CASE("scale names") {
    for (Scale s : {Scale::c, Scale::cbar, Scale::raw}) CHECK(parse_scale(scale_name(s)) == s);
    CHECK_FALSE(parse_scale("hours").has_value());
  }

  TEST_CASE("tracked sets") {
    const EnergyOracle o(test::params(14, 1.3, 8));
    const auto recs = top_k(o, 60);
    const auto t = make_tracked(recs, -0.5, 4);
    CHECK(t.I.size() <= 4);
    CHECK(t.J.size() <= 4);
    CHECK(t.size() == t.I.size() + t.J.size());
    for (std::size_t k = 0; k < t.I.size(); ++k) {
      const auto& c = t.classes[t.I[k]];
      CHECK(c.w > -0.5);
      CHECK(c.in_I);
      if (k > 0) CHECK(c.w >= t.classes[t.I[k - 1]].w);
    }
    for (std::size_t k = 0; k < t.J.size(); ++k) {
      CHECK(t.classes[t.J[k]].w < -0.5);
      CHECK_FALSE(t.classes[t.J[k]].in_I);
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(t.find(t.classes[i].sigma1) == i);
      for (std::size_t j = i + 1; j < t.size(); ++j) CHECK(t.classes[i].sigma1 != t.classes[j].sigma1);
    }
    CHECK_FALSE(t.find(o.first_level_states()).has_value());
    const auto top = track_top(recs, 3);
    CHECK(top.size() == 3);
    CHECK(top.J.empty());
    CHECK(top.classes[top.find(recs[0].sigma1).value()].rank == 1);
  }

  TEST_CASE("occupation accounting") {
    const EnergyOracle o(test::params(10, 1.3, 2));
    const auto t = tracked_for(o, -1.0, 3);
    for (Engine e : {Engine::naive, Engine::aggregated}) {
      SimulationOptions opt;
      opt.engine = e;
      opt.horizon = 5e4;
      opt.record_visits = true;
      auto rng = test::stream(20);
      const auto r = simulate(o, t, opt, rng);
      CHECK(r.reached_horizon);
      CHECK_FALSE(r.partial());
      double sum = r.other;
      for (double x : r.occupation) sum += x;
      CHECK(sum == doctest::Approx(r.total_time).epsilon(1e-9));
      CHECK(r.total_time == doctest::Approx(5e4).epsilon(1e-9));
      double frac = r.other_fraction();
      for (std::size_t c = 0; c < t.size(); ++c) frac += r.fraction(c);
      CHECK(frac == doctest::Approx(1.0));
      std::vector<double> visit_time(t.size(), 0.0);
      for (const auto& v : r.visits) {
        CHECK(v.psi == doctest::Approx(v.upsilon + v.gamma_vis));
        CHECK(v.upsilon >= 0.0);
        CHECK(v.gamma_vis >= 0.0);
        visit_time[v.cls] += v.psi;
      }
      for (std::size_t c = 0; c < t.size(); ++c) {
        CHECK(visit_time[c] <= r.occupation[c] * (1 + 1e-9) + 1e-9);
      }
    }
  }

  TEST_CASE("budget exhaustion is flagged") {
    const EnergyOracle o(test::params(10, 1.3, 2));
    const auto t = tracked_for(o, -1.0, 2);
    SimulationOptions opt;
    opt.engine = Engine::naive;
    opt.horizon = 1e9;
    opt.budget = 1000;
    auto rng = test::stream(21);
    const auto r = simulate(o, t, opt, rng);
    CHECK(r.partial());
    CHECK(r.events <= 1000);
    CHECK(r.total_time < 1e9);
  }

  TEST_CASE("runs are reproducible") {
    const EnergyOracle o(test::params(10, 1.5, 6));
    const auto t = tracked_for(o, -1.0, 3);
    SimulationOptions opt;
    opt.horizon = 2e4;
    opt.max_jumps = 50;
    auto a_rng = test::stream(22);
    auto b_rng = test::stream(22);
    const auto a = simulate(o, t, opt, a_rng);
    const auto b = simulate(o, t, opt, b_rng);
    CHECK(a.occupation == b.occupation);
    CHECK(a.jumps == b.jumps);
    CHECK(a.events == b.events);
  }

  TEST_CASE("fixed initial state") {
    const EnergyOracle o(test::params(10, 1.3, 2));
    const auto t = track_top(top_k(o, 5), 1);
    SimulationOptions opt;
    opt.engine = Engine::naive;
    opt.horizon = 1e-9;
    opt.init = o.compose(t.classes[0].sigma1, 0);
    auto rng = test::stream(23);
    const auto r = simulate(o, t, opt, rng);
    CHECK(r.occupation[0] == doctest::Approx(r.total_time));
  }

  TEST_CASE("sojourn mean matches the exact expression") {
    const EnergyOracle o(test::params(10, 1.0, 4));
    const auto t = track_top(top_k(o, 5), 2);
    const auto ts = timescales(o.derived(), 0.0);
    auto rng = test::stream(24);
    const auto ex = visit_experiment(o, t, 0, ts, Scale::raw, 4000, rng);
    CHECK_FALSE(ex.partial);
    CHECK(std::fabs(ex.psi.mean - ex.predicted_mean) < 4 * ex.psi.std_error());
    for (std::size_t i = 0; i < ex.visits.size(); ++i) CHECK(ex.rescaled[i] == doctest::Approx(ex.visits[i].psi));
    CHECK(std::fabs(ex.no_hit_fraction - ex.no_hit_predicted) < 4 * ex.no_hit_se + 1e-3);

    const auto& d = o.derived();
    double acc = 0.0;
    for (std::uint64_t s2 = 0; s2 < o.second_level_states(); ++s2) {
      acc += std::exp(d.model.beta * std::sqrt(10.0) * o.xi(o.compose(t.classes[0].sigma1, s2)));
    }
    CHECK(log_expected_sojourn(o, t.classes[0].sigma1) ==
          doctest::Approx(std::log(10.0 / d.N1 * acc / o.second_level_states())).epsilon(1e-12));
    CHECK_THROWS_AS(visit_experiment(o, t, 0, ts, Scale::raw, 99, rng), std::invalid_argument);
    CHECK_THROWS_AS(visit_experiment(o, t, 7, ts, Scale::raw, 200, rng), std::invalid_argument);
  }

  TEST_CASE("renewal excursions") {
    const EnergyOracle o(test::params(10, 1.3, 2));
    const auto t = tracked_for(o, -1.0, 2);
    REQUIRE_FALSE(t.I.empty());
    REQUIRE_FALSE(t.J.empty());
    SimulationOptions opt;
    opt.horizon = 2e7;
    auto rng = test::stream(25);
    const auto rep = renewal_experiment(o, t, opt, rng);
    CHECK(rep.excursions >= 50);
    CHECK(rep.max_identity_error < 1e-9);
    for (const auto& e : rep.trajectory.excursions) CHECK(e.visits_I[0] == 1);
    for (const auto& term : rep.I) {
      // Renewal-reward: time per excursion = visits per excursion x mean sojourn.
      const double expected = term.visits.mean * term.closed_form_mean;
      CHECK(std::fabs(term.time.mean - expected) < 5 * term.time.std_error() + 0.05 * expected);
    }
    double share = 0.0;
    for (const auto& term : rep.I) share += term.share.value;
    for (const auto& term : rep.J) share += term.share.value;
    CHECK(share == doctest::Approx(1.0).epsilon(1e-9));
    const auto no_j = track_top(top_k(o, 5), 2);
    CHECK_THROWS_AS(renewal_experiment(o, no_j, opt, rng), std::invalid_argument);
  }
}

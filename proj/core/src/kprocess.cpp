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

#include "grem/kprocess.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace grem {

KParams KParams::from(std::vector<double> gamma) {
  if (gamma.empty()) throw std::invalid_argument("K-process needs at least one state");
  for (double g : gamma) {
    if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("gamma must be positive and finite");
  }
  KParams p;
  p.M = gamma.size();
  p.total = std::accumulate(gamma.begin(), gamma.end(), 0.0);
  p.gamma = std::move(gamma);
  return p;
}

double KTrajectoryReport::fraction(std::size_t x) const {
  return horizon > 0.0 ? occupation.at(x) / horizon : 0.0;
}

KTrajectoryReport simulate_k(const KParams& params, double horizon, KInit init,
                             CounterStream& rng, bool record_durations) {
  if (params.M == 0 || params.gamma.size() != params.M) throw std::invalid_argument("malformed KParams");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  KTrajectoryReport rep;
  rep.horizon = horizon;
  rep.occupation.assign(params.M, 0.0);
  rep.visits.assign(params.M, 0);
  rep.arrivals.assign(params.M, 0);
  if (record_durations) rep.durations.resize(params.M);
  std::size_t x = init.state ? *init.state : static_cast<std::size_t>(rng.below(params.M));
  if (x >= params.M) throw std::invalid_argument("initial state out of range");
  double t = 0.0;
  ++rep.visits[x];
  double current = 0.0;  // length of the ongoing visit, across self-jumps
  for (;;) {
    const double h = rng.exponential(params.gamma[x]);
    if (t + h >= horizon) {
      rep.occupation[x] += horizon - t;
      break;
    }
    t += h;
    rep.occupation[x] += h;
    current += h;
    const auto y = static_cast<std::size_t>(rng.below(params.M));
    ++rep.jumps;
    ++rep.arrivals[y];
    if (y != x) {
      if (record_durations) rep.durations[x].push_back(current);
      current = 0.0;
      ++rep.visits[y];
      x = y;
    }
  }
  return rep;
}

std::vector<double> k_stationary(const KParams& params) {
  std::vector<double> pi(params.gamma);
  for (double& v : pi) v /= params.total;
  return pi;
}

std::vector<double> k_stationary_solve(const KParams& params) {
  const auto m = static_cast<Eigen::Index>(params.M);
  if (m == 1) return {1.0};
  // pi Q = 0 with sum pi = 1; Q(x,y) = 1/(M gamma_x) for y != x.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, m);
  const double share = 1.0 / static_cast<double>(m);
  for (Eigen::Index x = 0; x < m; ++x) {
    const double out = 1.0 / params.gamma[static_cast<std::size_t>(x)];
    for (Eigen::Index y = 0; y < m; ++y) {
      if (y != x) A(y, x) = out * share;
    }
    A(x, x) = -out * (1.0 - share);
    A(m, x) = 1.0;
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
  b(m) = 1.0;
  const Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);
  return std::vector<double>(pi.data(), pi.data() + m);
}

double occupation_of_first(const KParams& params) { return params.gamma.front() / params.total; }

std::vector<TruncationRow> truncation_diagnostic(const std::vector<double>& gamma_full,
                                                 const KObservable& observable,
                                                 const std::vector<std::size_t>& levels) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] == 0 || levels[i] > gamma_full.size() || (i > 0 && levels[i] <= levels[i - 1])) {
      throw std::invalid_argument("truncation levels must increase within the weight list");
    }
  }
  std::vector<TruncationRow> rows;
  double previous = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::size_t M = levels[i];
    const auto p = KParams::from(std::vector<double>(gamma_full.begin(), gamma_full.begin() + static_cast<std::ptrdiff_t>(M)));
    TruncationRow r;
    r.M = M;
    r.value = observable(p);
    r.drift = i == 0 ? 0.0 : std::fabs(r.value - previous);
    for (std::size_t j = M; j < gamma_full.size(); ++j) r.tail_mass += gamma_full[j];
    r.tail_ratio = r.tail_mass / p.total;
    previous = r.value;
    rows.push_back(r);
  }
  return rows;
}

LimitObservables observables_of(const KTrajectoryReport& k) {
  LimitObservables o;
  for (std::size_t x = 0; x < k.occupation.size(); ++x) o.occupation.push_back(k.fraction(x));
  o.durations = k.durations;
  o.durations.resize(k.occupation.size());
  o.arrivals = k.arrivals;
  return o;
}

LimitObservables observables_of(const TrajectoryReport& dyn, std::size_t classes) {
  LimitObservables o;
  o.occupation.resize(classes, 0.0);
  o.durations.resize(classes);
  o.arrivals.assign(classes, 0);
  const double unit = std::exp(dyn.log_scale);
  for (std::size_t c = 0; c < classes && c < dyn.occupation.size(); ++c) o.occupation[c] = dyn.fraction(c);
  for (const auto& v : dyn.visits) {
    if (v.cls < classes) o.durations[v.cls].push_back(v.psi / unit);
  }
  for (auto c : dyn.jumps) {
    if (c >= 0 && static_cast<std::size_t>(c) < classes) ++o.arrivals[static_cast<std::size_t>(c)];
  }
  return o;
}

ComparisonReport compare_limit(const LimitObservables& dyn, const LimitObservables& k,
                               const std::vector<std::pair<std::size_t, std::size_t>>& mapping) {
  const std::size_t m = k.occupation.size();
  std::vector<int> covered(m, 0);
  for (const auto& [ds, ks] : mapping) {
    if (ks >= m || ds >= dyn.occupation.size()) throw std::invalid_argument("mapping refers to a missing state");
    ++covered[ks];
  }
  if (std::any_of(covered.begin(), covered.end(), [](int c) { return c != 1; })) {
    throw std::invalid_argument("mapping incomplete");
  }
  ComparisonReport rep;
  std::vector<double> dyn_arrivals;
  std::vector<double> k_arrivals;
  for (const auto& [ds, ks] : mapping) {
    ComparisonRow row;
    row.dyn_state = ds;
    row.k_state = ks;
    row.dyn_occupation = dyn.occupation[ds];
    row.k_occupation = k.occupation[ks];
    row.relative_difference = row.k_occupation > 0.0
                                  ? std::fabs(row.dyn_occupation - row.k_occupation) / row.k_occupation
                                  : std::fabs(row.dyn_occupation);
    if (ds < dyn.durations.size() && ks < k.durations.size() && !dyn.durations[ds].empty() &&
        !k.durations[ks].empty()) {
      row.durations = ks_two_sample(dyn.durations[ds], k.durations[ks]);
    }
    rep.max_relative_difference = std::max(rep.max_relative_difference, row.relative_difference);
    if (ds < dyn.arrivals.size()) dyn_arrivals.push_back(static_cast<double>(dyn.arrivals[ds]));
    if (ks < k.arrivals.size()) k_arrivals.push_back(static_cast<double>(k.arrivals[ks]));
    rep.rows.push_back(std::move(row));
  }
  auto uniformity = [](const std::vector<double>& counts) -> std::optional<FitReport> {
    if (counts.size() < 2 || std::accumulate(counts.begin(), counts.end(), 0.0) <= 0.0) return std::nullopt;
    return chi_square_gof(counts, std::vector<double>(counts.size(), 1.0));
  };
  if (dyn_arrivals.size() == m) rep.dyn_uniformity = uniformity(dyn_arrivals);
  if (k_arrivals.size() == m) rep.k_uniformity = uniformity(k_arrivals);
  return rep;
}

}  // namespace grem

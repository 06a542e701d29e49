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

#include "grem/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "grem/hitting.hpp"

namespace grem {
namespace {

double log_add(double x, double y) {
  if (x < y) std::swap(x, y);
  if (y == -std::numeric_limits<double>::infinity()) return x;
  return x + std::log1p(std::exp(y - x));
}

double log_n_over(const DerivedParams& d, int part) {
  return std::log(static_cast<double>(part) / static_cast<double>(d.model.N));
}

// Rate constants shared by both engines.
struct Kernel {
  explicit Kernel(const EnergyOracle& o)
      : oracle(o),
        d(o.derived()),
        b_full(d.model.beta * d.sqrtN()),
        b_first(d.model.beta * std::sqrt(d.model.a * d.model.N)),
        b_second(d.model.beta * std::sqrt((1.0 - d.model.a) * d.model.N)),
        log_n1(log_n_over(d, d.N1)),
        log_n2(log_n_over(d, d.N2)),
        log_ratio(std::log(static_cast<double>(d.N2) / d.N1)) {}

  double log_total(double xi, double xi2) const {
    return log_add(log_n1 - b_full * xi, log_n2 - b_second * xi2);
  }

  double mean_holding(std::uint64_t sigma) const {
    const auto e = oracle.energies(sigma);
    return std::exp(-log_total(e.xi, e.xi2));
  }

  // 1 / mu_N(sigma1)
  double level1_probability(double xi1) const {
    const double x = log_ratio + b_first * xi1;
    if (x > 0.0) {
      const double e = std::exp(-x);
      return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
  }

  const EnergyOracle& oracle;
  const DerivedParams& d;
  double b_full;
  double b_first;
  double b_second;
  double log_n1;
  double log_n2;
  double log_ratio;
};

class Accounting {
 public:
  Accounting(const TrackedSet& tracked, const SimulationOptions& opt, TrajectoryReport& rep)
      : tracked_(tracked), opt_(opt), rep_(rep), visit_counts_(tracked.size(), 0) {
    rep_.occupation.assign(tracked.size(), 0.0);
    if (opt_.record_renewal) {
      if (tracked.I.empty()) throw std::invalid_argument("renewal tracking needs a nonempty I_M");
      reference_ = tracked.I.front();
      acc_time_.assign(tracked.size(), 0.0);
      acc_visits_.assign(tracked.size(), 0);
    }
  }

  void begin(std::int64_t cls) {
    cls_ = cls;
    upsilon_ = 0.0;
    gamma_ = 0.0;
    if (rep_.jumps.size() < opt_.max_jumps) rep_.jumps.push_back(cls);
  }

  void add(double h, bool matched) {
    if (cls_ == kOtherClass) {
      rep_.other += h;
      return;
    }
    rep_.occupation[static_cast<std::size_t>(cls_)] += h;
    (matched ? upsilon_ : gamma_) += h;
  }

  void truncate(double h) {
    if (cls_ == kOtherClass) {
      rep_.other += h;
    } else {
      rep_.occupation[static_cast<std::size_t>(cls_)] += h;
    }
  }

  void end() {
    ++rep_.sojourns;
    if (cls_ == kOtherClass) return;
    const auto c = static_cast<std::size_t>(cls_);
    const double psi = upsilon_ + gamma_;
    const std::uint64_t index = visit_counts_[c]++;
    if (opt_.record_visits) rep_.visits.push_back({c, index, psi, upsilon_, gamma_});
    if (!opt_.record_renewal) return;
    if (started_) {
      acc_time_[c] += psi;
      ++acc_visits_[c];
      acc_R_ += psi;
    }
    if (c == reference_) {
      if (started_) emit();
      started_ = true;
      std::fill(acc_time_.begin(), acc_time_.end(), 0.0);
      std::fill(acc_visits_.begin(), acc_visits_.end(), 0);
      acc_R_ = 0.0;
    }
  }

  std::int64_t current() const { return cls_; }

 private:
  void emit() {
    Excursion ex;
    for (std::size_t i : tracked_.I) {
      ex.F.push_back(acc_time_[i]);
      ex.visits_I.push_back(acc_visits_[i]);
    }
    for (std::size_t j : tracked_.J) {
      ex.Q.push_back(acc_time_[j]);
      ex.visits_J.push_back(acc_visits_[j]);
    }
    ex.R = acc_R_;
    rep_.excursions.push_back(std::move(ex));
  }

  const TrackedSet& tracked_;
  const SimulationOptions& opt_;
  TrajectoryReport& rep_;
  std::vector<std::uint64_t> visit_counts_;
  std::int64_t cls_ = kOtherClass;
  double upsilon_ = 0.0;
  double gamma_ = 0.0;
  bool started_ = false;
  std::size_t reference_ = 0;
  std::vector<double> acc_time_;
  std::vector<std::uint64_t> acc_visits_;
  double acc_R_ = 0.0;
};

std::int64_t class_of(const TrackedSet& tracked, std::uint64_t sigma1) {
  const auto c = tracked.find(sigma1);
  return c ? static_cast<std::int64_t>(*c) : kOtherClass;
}

// One first-level sojourn simulated as a geometric number of jumps with the
// holding times at each distinct second-level state drawn in aggregate.
class SojournSampler {
 public:
  SojournSampler(const Kernel& k, const TrackedSet& tracked) : k_(k), tracked_(tracked) {
    dense_ = k.d.N2 <= 20;
    if (dense_) counts_.assign(std::size_t{1} << k.d.N2, 0);
    caches_.resize(tracked.size());
    xi1_.resize(tracked.size());
    for (std::size_t c = 0; c < tracked.size(); ++c) xi1_[c] = k.oracle.xi1(tracked.classes[c].sigma1);
  }

  struct Outcome {
    std::uint64_t jumps = 0;
    double total = 0.0;
    double upsilon = 0.0;
    std::uint64_t exit_sigma2 = 0;
  };

  /// Number of jumps the next sojourn will take; drawn before the walk so the
  /// caller can enforce its event budget.
  std::uint64_t draw_jumps(std::int64_t cls, std::uint64_t sigma1, CounterStream& rng) {
    const double x1 = cls == kOtherClass ? k_.oracle.xi1(sigma1) : xi1_[static_cast<std::size_t>(cls)];
    return rng.geometric(k_.level1_probability(x1));
  }

  Outcome run(std::int64_t cls, std::uint64_t sigma1, std::uint64_t sigma2, std::uint64_t jumps,
              CounterStream& rng) {
    Outcome out;
    out.jumps = jumps;
    touched_.clear();
    sparse_.clear();
    const int n2 = k_.d.N2;
    std::uint64_t s2 = sigma2;
    bump(s2);
    for (std::uint64_t j = 1; j < jumps; ++j) {
      s2 ^= std::uint64_t{1} << rng.below(static_cast<std::uint64_t>(n2));
      bump(s2);
    }
    out.exit_sigma2 = s2;
    const bool tracked = cls != kOtherClass;
    const std::uint64_t matched =
        tracked ? tracked_.classes[static_cast<std::size_t>(cls)].matched_sigma2 : 0;
    for (std::uint64_t s : touched_) {
      const std::uint64_t n = dense_ ? counts_[s] : sparse_[s];
      if (dense_) counts_[s] = 0;
      const double t = mean(cls, sigma1, s) * rng.erlang(n);
      out.total += t;
      if (tracked && s == matched) out.upsilon += t;
    }
    return out;
  }

 private:
  void bump(std::uint64_t s2) {
    if (dense_) {
      if (counts_[s2]++ == 0) touched_.push_back(s2);
    } else if (sparse_[s2]++ == 0) {
      touched_.push_back(s2);
    }
  }

  double mean(std::int64_t cls, std::uint64_t sigma1, std::uint64_t s2) {
    const std::uint64_t sigma = k_.oracle.compose(sigma1, s2);
    if (cls == kOtherClass || !dense_) return k_.mean_holding(sigma);
    auto& cache = caches_[static_cast<std::size_t>(cls)];
    if (cache.empty()) cache.assign(std::size_t{1} << k_.d.N2, -1.0);
    double& m = cache[s2];
    if (m < 0.0) m = k_.mean_holding(sigma);
    return m;
  }

  const Kernel& k_;
  const TrackedSet& tracked_;
  bool dense_ = true;
  std::vector<std::uint32_t> counts_;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
  std::vector<std::uint64_t> touched_;
  std::vector<std::vector<double>> caches_;
  std::vector<double> xi1_;
};

void run_naive(const EnergyOracle& oracle, const TrackedSet& tracked, const SimulationOptions& opt,
               double target, std::uint64_t sigma, CounterStream& rng, TrajectoryReport& rep) {
  Accounting acc(tracked, opt, rep);
  DynState state{sigma, 0.0};
  acc.begin(class_of(tracked, oracle.sigma1_of(sigma)));
  while (rep.events < opt.budget) {
    const auto cls = acc.current();
    const bool matched =
        cls != kOtherClass &&
        oracle.sigma2_of(state.sigma) == tracked.classes[static_cast<std::size_t>(cls)].matched_sigma2;
    const auto s = step(oracle, state, rng);
    if (state.t + s.holding >= target) {
      acc.truncate(target - state.t);
      state.t = target;
      rep.reached_horizon = true;
      break;
    }
    ++rep.events;
    acc.add(s.holding, matched);
    state = s.state;
    if (s.level == Level::first) {
      acc.end();
      acc.begin(class_of(tracked, oracle.sigma1_of(state.sigma)));
    }
  }
  rep.total_time = state.t;
}

void run_aggregated(const EnergyOracle& oracle, const TrackedSet& tracked,
                    const SimulationOptions& opt, double target, std::uint64_t sigma,
                    CounterStream& rng, TrajectoryReport& rep) {
  const Kernel kernel(oracle);
  SojournSampler sampler(kernel, tracked);
  Accounting acc(tracked, opt, rep);
  std::uint64_t s1 = oracle.sigma1_of(sigma);
  std::uint64_t s2 = oracle.sigma2_of(sigma);
  const int n1 = oracle.derived().N1;
  double t = 0.0;
  for (;;) {
    const auto cls = class_of(tracked, s1);
    acc.begin(cls);
    const std::uint64_t jumps = sampler.draw_jumps(cls, s1, rng);
    if (jumps > opt.budget - rep.events) break;
    const auto out = sampler.run(cls, s1, s2, jumps, rng);
    rep.events += jumps;
    if (t + out.total >= target) {
      acc.truncate(target - t);
      t = target;
      rep.reached_horizon = true;
      break;
    }
    t += out.total;
    acc.add(out.upsilon, true);
    acc.add(out.total - out.upsilon, false);
    acc.end();
    s2 = out.exit_sigma2;
    s1 ^= std::uint64_t{1} << rng.below(static_cast<std::uint64_t>(n1));
  }
  rep.total_time = t;
}

}  // namespace

TimeScales timescales(const DerivedParams& d, double L) {
  const auto& m = d.model;
  if (std::fabs(m.a - m.p) <= 1e-12 && L >= 0.0) {
    throw std::invalid_argument("a = p requires L < 0");
  }
  const double n = static_cast<double>(m.N);
  const double bs = d.beta_star;
  const double extreme = m.beta * (bs * n - (std::log(n) + d.kappa) / (2.0 * bs));
  TimeScales ts;
  ts.L = L;
  ts.c_N_log = extreme - m.beta * (bs * m.a * n + std::sqrt(m.a * n) * L);
  ts.bar_c_N_log = -d.N2 * std::numbers::ln2 + extreme;
  ts.theta = (1.0 - m.p) * L / (2.0 * std::pow(m.a, 1.5));
  ts.beta_FT = d.bar_beta_FT - ts.theta / std::sqrt(n);
  return ts;
}

double fine_tuned_beta(const ModelParams& m, double L) {
  ModelParams probe = m;
  probe.beta = 1.0;
  return timescales(derive(probe), L).beta_FT;
}

std::optional<Scale> parse_scale(const std::string& name) {
  if (name == "c") return Scale::c;
  if (name == "cbar") return Scale::cbar;
  if (name == "raw") return Scale::raw;
  return std::nullopt;
}

const char* scale_name(Scale s) {
  switch (s) {
    case Scale::c: return "c";
    case Scale::cbar: return "cbar";
    case Scale::raw: return "raw";
  }
  return "raw";
}

double log_scale(const TimeScales& ts, Scale s) {
  switch (s) {
    case Scale::c: return ts.c_N_log;
    case Scale::cbar: return ts.bar_c_N_log;
    case Scale::raw: return 0.0;
  }
  return 0.0;
}

double Rates::r1() const { return std::exp(log_r1); }
double Rates::r2() const { return std::exp(log_r2); }
double Rates::total() const { return std::exp(log_total); }
double Rates::mean_holding() const { return std::exp(-log_total); }

Rates rates(const EnergyOracle& oracle, std::uint64_t sigma) {
  const Kernel k(oracle);
  const auto e = oracle.energies(sigma);
  const double log_n = std::log(static_cast<double>(k.d.model.N));
  Rates r;
  r.log_r1 = -k.b_full * e.xi - log_n;
  r.log_r2 = -k.b_second * e.xi2 - log_n;
  const double a1 = std::log(static_cast<double>(k.d.N1)) + r.log_r1;
  const double a2 = std::log(static_cast<double>(k.d.N2)) + r.log_r2;
  r.log_total = log_add(a1, a2);
  r.level1_probability = std::exp(a1 - r.log_total);
  return r;
}

double log_mu(const DerivedParams& d, double xi1) {
  const double x = std::log(static_cast<double>(d.N2) / d.N1) +
                   d.model.beta * std::sqrt(d.model.a * d.model.N) * xi1;
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

StepResult step(const EnergyOracle& oracle, const DynState& state, CounterStream& rng) {
  const auto r = rates(oracle, state.sigma);
  StepResult out;
  out.holding = rng.exponential(r.mean_holding());
  const auto& d = oracle.derived();
  std::uint64_t sigma = state.sigma;
  if (rng.uniform() < r.level1_probability) {
    out.level = Level::first;
    sigma ^= std::uint64_t{1} << (d.N2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d.N1))));
  } else {
    out.level = Level::second;
    sigma ^= std::uint64_t{1} << rng.below(static_cast<std::uint64_t>(d.N2));
  }
  out.state = {sigma, state.t + out.holding};
  return out;
}

std::optional<std::size_t> TrackedSet::find(std::uint64_t sigma1) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].sigma1 == sigma1) return i;
  }
  return std::nullopt;
}

namespace {

TrackedClass class_from(const ExtremeRecord& r, double L) {
  TrackedClass c;
  c.rank = r.rank;
  c.sigma1 = r.sigma1;
  c.matched_sigma2 = r.sigma2;
  c.xi1 = r.xi1;
  c.w = r.w;
  c.in_I = r.w > L;
  return c;
}

void order_by_w(TrackedSet& t) {
  auto by_w = [&t](std::size_t x, std::size_t y) { return t.classes[x].w < t.classes[y].w; };
  std::sort(t.I.begin(), t.I.end(), by_w);
  std::sort(t.J.begin(), t.J.end(), by_w);
}

bool seen(const TrackedSet& t, std::uint64_t sigma1) { return t.find(sigma1).has_value(); }

}  // namespace

TrackedSet make_tracked(const std::vector<ExtremeRecord>& records, double L, std::size_t M) {
  TrackedSet t;
  t.L = L;
  std::vector<std::uint64_t> skipped;
  for (const auto& r : records) {
    if (t.I.size() >= M && t.J.size() >= M) break;
    if (seen(t, r.sigma1) || std::find(skipped.begin(), skipped.end(), r.sigma1) != skipped.end()) {
      continue;
    }
    const bool upper = r.w > L;
    const bool lower = r.w < L;
    if ((upper && t.I.size() < M) || (lower && t.J.size() < M)) {
      t.classes.push_back(class_from(r, L));
      (upper ? t.I : t.J).push_back(t.classes.size() - 1);
    } else {
      // Later records of the same class must not enter either list.
      skipped.push_back(r.sigma1);
    }
  }
  order_by_w(t);
  return t;
}

TrackedSet track_top(const std::vector<ExtremeRecord>& records, std::size_t M) {
  TrackedSet t;
  t.L = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (t.classes.size() >= M) break;
    if (seen(t, r.sigma1)) continue;
    t.classes.push_back(class_from(r, t.L));
    t.I.push_back(t.classes.size() - 1);
  }
  order_by_w(t);
  return t;
}

double TrajectoryReport::fraction(std::size_t cls) const {
  return total_time > 0.0 ? occupation.at(cls) / total_time : 0.0;
}

double TrajectoryReport::other_fraction() const {
  return total_time > 0.0 ? other / total_time : 0.0;
}

TrajectoryReport simulate(const EnergyOracle& oracle, const TrackedSet& tracked,
                          const SimulationOptions& options, CounterStream& rng) {
  if (!(options.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  const auto start = std::chrono::steady_clock::now();
  const auto& d = oracle.derived();
  TrajectoryReport rep;
  if (options.scale != Scale::raw) {
    rep.log_scale = log_scale(timescales(d, options.L), options.scale);
  }
  rep.target_time = options.horizon * std::exp(rep.log_scale);
  std::uint64_t sigma = options.init ? *options.init : rng.below(oracle.states());
  if (sigma >= oracle.states()) throw std::invalid_argument("initial configuration out of range");
  if (options.engine == Engine::naive) {
    run_naive(oracle, tracked, options, rep.target_time, sigma, rng, rep);
  } else {
    run_aggregated(oracle, tracked, options, rep.target_time, sigma, rng, rep);
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

double log_expected_sojourn(const EnergyOracle& oracle, std::uint64_t sigma1) {
  const auto& d = oracle.derived();
  const double b = d.model.beta * d.sqrtN();
  double acc = -std::numeric_limits<double>::infinity();
  const std::uint64_t n2 = oracle.second_level_states();
  for (std::uint64_t s2 = 0; s2 < n2; ++s2) acc = log_add(acc, b * oracle.xi(oracle.compose(sigma1, s2)));
  return std::log(static_cast<double>(d.model.N) / d.N1) - d.N2 * std::numbers::ln2 + acc;
}

VisitExperiment visit_experiment(const EnergyOracle& oracle, const TrackedSet& tracked,
                                 std::size_t cls, const TimeScales& ts, Scale scale,
                                 std::size_t replicas, CounterStream& rng, std::uint64_t budget) {
  if (replicas < kMinVisitReplicas) throw std::invalid_argument("visit_experiment needs >= 100 replicas");
  if (cls >= tracked.size()) throw std::invalid_argument("class index out of range");
  const Kernel kernel(oracle);
  SojournSampler sampler(kernel, tracked);
  const auto& c = tracked.classes[cls];
  VisitExperiment ex;
  ex.cls = cls;
  ex.log_scale = log_scale(ts, scale);
  const double unit = std::exp(ex.log_scale);
  ex.predicted_mean = std::exp(log_expected_sojourn(oracle, c.sigma1) - ex.log_scale);
  std::size_t misses = 0;
  for (std::size_t r = 0; r < replicas; ++r) {
    const std::uint64_t s2 = rng.below(oracle.second_level_states());
    const auto jumps = sampler.draw_jumps(static_cast<std::int64_t>(cls), c.sigma1, rng);
    if (jumps > budget - ex.events) {
      ex.partial = true;
      break;
    }
    const auto out = sampler.run(static_cast<std::int64_t>(cls), c.sigma1, s2, jumps, rng);
    ex.events += jumps;
    Visit v;
    v.cls = cls;
    v.index = r;
    v.upsilon = out.upsilon;
    v.gamma_vis = out.total - out.upsilon;
    v.psi = v.upsilon + v.gamma_vis;
    ex.visits.push_back(v);
    ex.rescaled.push_back(v.psi / unit);
    misses += v.upsilon == 0.0 ? 1 : 0;
  }
  if (ex.visits.empty()) throw std::runtime_error("no visits observed within budget");
  ex.psi = summarize(ex.rescaled);
  ex.exponential_fit = ks_exponential(ex.rescaled, ex.predicted_mean);
  const double n = static_cast<double>(ex.visits.size());
  ex.no_hit_fraction = static_cast<double>(misses) / n;
  ex.no_hit_predicted = no_hit(oracle.derived(), c.xi1);
  ex.no_hit_se = std::sqrt(ex.no_hit_predicted * (1.0 - ex.no_hit_predicted) / n);
  return ex;
}

RenewalReport renewal_experiment(const EnergyOracle& oracle, const TrackedSet& tracked,
                                 const SimulationOptions& options, CounterStream& rng) {
  if (tracked.I.empty() || tracked.J.empty()) {
    throw std::invalid_argument("renewal needs nonempty I_M and J_M");
  }
  SimulationOptions opt = options;
  opt.record_renewal = true;
  RenewalReport rep;
  rep.trajectory = simulate(oracle, tracked, opt, rng);
  const auto& exs = rep.trajectory.excursions;
  if (exs.size() < 2) throw std::runtime_error("reference state never revisited within budget");
  rep.excursions = exs.size();

  std::vector<double> log_mean(tracked.size());
  double log_total = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < tracked.size(); ++c) {
    log_mean[c] = log_expected_sojourn(oracle, tracked.classes[c].sigma1);
    log_total = log_add(log_total, log_mean[c]);
  }

  std::vector<double> R;
  for (const auto& e : exs) {
    R.push_back(e.R);
    double parts = 0.0;
    for (double f : e.F) parts += f;
    for (double q : e.Q) parts += q;
    if (e.R > 0.0) rep.max_identity_error = std::max(rep.max_identity_error, std::fabs(e.R - parts) / e.R);
  }
  rep.R = summarize(R);

  auto term = [&](std::size_t cls, std::size_t slot, bool in_I) {
    std::vector<double> time;
    std::vector<double> visits;
    for (const auto& e : exs) {
      time.push_back(in_I ? e.F[slot] : e.Q[slot]);
      visits.push_back(static_cast<double>(in_I ? e.visits_I[slot] : e.visits_J[slot]));
    }
    RenewalTerm t;
    t.cls = cls;
    t.share = ratio_of_means(time, R);
    t.predicted_share = std::exp(log_mean[cls] - log_total);
    t.visits = summarize(visits);
    t.time = summarize(time);
    t.closed_form_mean = std::exp(log_mean[cls]);
    return t;
  };
  for (std::size_t m = 0; m < tracked.I.size(); ++m) rep.I.push_back(term(tracked.I[m], m, true));
  for (std::size_t m = 0; m < tracked.J.size(); ++m) rep.J.push_back(term(tracked.J[m], m, false));
  return rep;
}

}  // namespace grem

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

#include "grem/io.hpp"

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace grem {
namespace {

// Round-trip exact.
std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing config key: ") + key);
  const auto& v = j.at(key);
  bool ok = v.is_number();
  if constexpr (std::is_integral_v<T>) ok = v.is_number_integer();
  if constexpr (std::is_unsigned_v<T>) ok = ok && (v.is_number_unsigned() || v.get<std::int64_t>() >= 0);
  if (!ok) throw std::invalid_argument(std::string("config key has the wrong type: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("config key has the wrong type: ") + key);
  }
}

}  // namespace

ModelParams model_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  ModelParams m;
  m.N = required<int>(j, "N");
  m.p = required<double>(j, "p");
  m.a = required<double>(j, "a");
  m.beta = required<double>(j, "beta");
  m.seed = required<std::uint64_t>(j, "seed");
  return m;
}

void to_json(json& j, const ModelParams& m) {
  j = json{{"N", m.N}, {"p", m.p}, {"a", m.a}, {"beta", m.beta}, {"seed", m.seed}};
}

void to_json(json& j, const DerivedParams& d) {
  j = json{{"model", d.model},          {"N1", d.N1},
           {"N2", d.N2},                {"beta_star", d.beta_star},
           {"kappa", d.kappa},          {"bar_beta_FT", d.bar_beta_FT},
           {"alpha", d.alpha},          {"low_temp", d.low_temp},
           {"ft_visible", d.ft_visible}};
}

void to_json(json& j, const ExtremeRecord& r) {
  j = json{{"rank", r.rank},   {"sigma1", r.sigma1}, {"sigma2", r.sigma2}, {"xi_total", r.xi_total},
           {"xi1", r.xi1},     {"xi2", r.xi2},       {"u_inv", r.u_inv},   {"w", r.w}};
}

void to_json(json& j, const BinStats& b) {
  j = json{{"j", b.j}, {"count", b.count}, {"delta", b.delta}, {"eps", b.eps}};
  j["bin_max"] = b.bin_max ? json(*b.bin_max) : json("empty");
}

void to_json(json& j, const FitReport& f) {
  j = json{{"statistic", f.statistic}, {"p_value", f.p_value}, {"n", f.n}, {"target", f.target}};
}

void to_json(json& j, const Summary& s) {
  j = json{{"n", s.n}, {"mean", s.mean}, {"variance", s.variance}, {"std_error", s.std_error()}};
}

void to_json(json& j, const Thm1Report& r) {
  j = json{{"case", r.which == ThmCase::a_less_p ? "a<p" : "a=p"},
           {"replicas", r.replicas},
           {"alpha", r.alpha},
           {"gumbel", r.gumbel},
           {"w", r.w},
           {"w_target_variance", r.w_target_variance},
           {"w_mean_z", r.w_mean_z},
           {"w_mean_p", r.w_mean_p},
           {"w_variance_ci", {r.w_variance_ci.lo, r.w_variance_ci.hi}},
           {"w_variance_ok", r.w_variance_ok},
           {"w_variance_p", r.w_variance_p},
           {"correlation", r.correlation},
           {"correlation_se", r.correlation_se},
           {"correlation_ok", r.correlation_ok},
           {"negative_fraction", r.negative_fraction},
           {"sign_p", r.sign_p}};
}

void to_json(json& j, const TimeScales& ts) {
  j = json{{"c_N_log", ts.c_N_log}, {"bar_c_N_log", ts.bar_c_N_log}, {"L", ts.L},
           {"theta", ts.theta},     {"beta_FT", ts.beta_FT}};
}

void to_json(json& j, const TrackedSet& t) {
  j = json::object();
  j["L"] = t.L;
  json classes = json::array();
  for (const auto& c : t.classes) {
    classes.push_back({{"rank", c.rank},
                       {"sigma1", c.sigma1},
                       {"matched_sigma2", c.matched_sigma2},
                       {"xi1", c.xi1},
                       {"w", c.w},
                       {"in_I", c.in_I}});
  }
  j["classes"] = classes;
  j["I"] = t.I;
  j["J"] = t.J;
}

void to_json(json& j, const Visit& v) {
  j = json{{"class", v.cls}, {"visit_index", v.index}, {"psi", v.psi},
           {"upsilon", v.upsilon}, {"gamma_vis", v.gamma_vis}};
}

void to_json(json& j, const TrajectoryReport& r) {
  j = json{{"occupation", r.occupation},
           {"other", r.other},
           {"total_time", r.total_time},
           {"target_time", r.target_time},
           {"log_scale", r.log_scale},
           {"visits", r.visits.size()},
           {"excursions", r.excursions.size()},
           {"events", r.events},
           {"sojourns", r.sojourns},
           {"reached_horizon", r.reached_horizon},
           {"incomplete", r.partial()}};
}

void to_json(json& j, const VisitExperiment& v) {
  j = json{{"class", v.cls},
           {"visits", v.visits.size()},
           {"log_scale", v.log_scale},
           {"predicted_mean", v.predicted_mean},
           {"psi", v.psi},
           {"exponential_fit", v.exponential_fit},
           {"no_hit_fraction", v.no_hit_fraction},
           {"no_hit_se", v.no_hit_se},
           {"no_hit_predicted", v.no_hit_predicted},
           {"events", v.events},
           {"incomplete", v.partial}};
}

void to_json(json& j, const RatioEstimate& r) {
  j = json{{"value", r.value}, {"std_error", r.std_error}};
}

void to_json(json& j, const RenewalTerm& t) {
  j = json{{"class", t.cls},
           {"share", t.share},
           {"predicted_share", t.predicted_share},
           {"visits", t.visits},
           {"time", t.time},
           {"closed_form_mean", t.closed_form_mean}};
}

void to_json(json& j, const RenewalReport& r) {
  j = json{{"excursions", r.excursions}, {"I", r.I},
           {"J", r.J},                   {"R", r.R},
           {"max_identity_error", r.max_identity_error},
           {"trajectory", r.trajectory}};
}

void to_json(json& j, const KTrajectoryReport& r) {
  j = json{{"occupation", r.occupation}, {"visits", r.visits}, {"arrivals", r.arrivals},
           {"horizon", r.horizon},       {"jumps", r.jumps}};
}

void to_json(json& j, const TruncationRow& r) {
  j = json{{"M", r.M}, {"value", r.value}, {"drift", r.drift}, {"tail_mass", r.tail_mass},
           {"tail_ratio", r.tail_ratio}};
}

void to_json(json& j, const ComparisonReport& r) {
  j = json::object();
  json rows = json::array();
  for (const auto& row : r.rows) {
    json e{{"dyn_state", row.dyn_state},
           {"k_state", row.k_state},
           {"dyn_occupation", row.dyn_occupation},
           {"k_occupation", row.k_occupation},
           {"relative_difference", row.relative_difference}};
    if (row.durations) e["durations"] = *row.durations;
    rows.push_back(e);
  }
  j["rows"] = rows;
  j["max_relative_difference"] = r.max_relative_difference;
  if (r.dyn_uniformity) j["dyn_uniformity"] = *r.dyn_uniformity;
  if (r.k_uniformity) j["k_uniformity"] = *r.k_uniformity;
}

void to_json(json& j, const DenominatorReport& r) {
  j = json{{"exact", r.exact},         {"approx", r.approx},         {"rel_gap", r.rel_gap},
           {"sum_exact", r.sum_exact}, {"sum_approx", r.sum_approx}, {"sum_rel_gap", r.sum_rel_gap}};
}

void write_records_csv(std::ostream& os, const std::vector<ExtremeRecord>& records) {
  os << "rank,sigma1,sigma2,xi_total,xi1,xi2,u_inv,w\n";
  for (const auto& r : records) {
    os << r.rank << ',' << r.sigma1 << ',' << r.sigma2 << ',' << num(r.xi_total) << ','
       << num(r.xi1) << ',' << num(r.xi2) << ',' << num(r.u_inv) << ',' << num(r.w) << '\n';
  }
}

void write_bins_csv(std::ostream& os, const std::vector<BinStats>& bins) {
  os << "j,count,bin_max,delta,eps\n";
  for (const auto& b : bins) {
    os << b.j << ',' << b.count << ',' << (b.bin_max ? num(*b.bin_max) : std::string()) << ','
       << num(b.delta) << ',' << num(b.eps) << '\n';
  }
}

void write_visits_csv(std::ostream& os, const TrackedSet& tracked, const std::vector<Visit>& visits) {
  os << "rank,visit_index,psi,upsilon,gamma_vis\n";
  for (const auto& v : visits) {
    os << tracked.classes.at(v.cls).rank << ',' << v.index << ',' << num(v.psi) << ','
       << num(v.upsilon) << ',' << num(v.gamma_vis) << '\n';
  }
}

void write_kemperman_csv(std::ostream& os, const std::vector<KempermanRow>& rows) {
  os << "n,q,lambda,gf_exact,gf_formula,rel_err\n";
  for (const auto& r : rows) {
    os << r.n << ',' << num(r.q) << ',' << num(r.lambda) << ',' << num(r.gf_exact) << ','
       << num(r.gf_formula) << ',' << num(r.rel_err) << '\n';
  }
}

}  // namespace grem

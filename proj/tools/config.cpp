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

#include "config.hpp"

#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace grem::cli {
namespace {

constexpr std::array<std::pair<Experiment, const char*>, 11> kNames{{
    {Experiment::params, "params"},
    {Experiment::env_topk, "env-topk"},
    {Experiment::env_bins, "env-bins"},
    {Experiment::thm1, "thm1"},
    {Experiment::gibbs_check, "gibbs-check"},
    {Experiment::simulate, "simulate"},
    {Experiment::occupation, "occupation"},
    {Experiment::visits, "visits"},
    {Experiment::renewal, "renewal"},
    {Experiment::kproc, "kproc"},
    {Experiment::kemperman, "kemperman"},
}};

const std::set<std::string> kKeys{"N",     "p",        "a",       "beta",  "seed",  "experiment", "replicas",
                                  "L",     "theta",    "horizon", "scale", "k",     "M",          "rank",
                                  "visits", "engine",  "delta",   "eps",   "gamma", "q",          "n_max",
                                  "fine_tune", "out",  "format",  "workers", "budget"};

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

double number(const json& j, const char* key) {
  if (!j.at(key).is_number()) fail(std::string("config key has the wrong type: ") + key);
  return j.at(key).get<double>();
}

std::uint64_t count(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    fail(std::string("config key must be a non-negative integer: ") + key);
  }
  return v.get<std::uint64_t>();
}

std::string text(const json& j, const char* key) {
  if (!j.at(key).is_string()) fail(std::string("config key has the wrong type: ") + key);
  return j.at(key).get<std::string>();
}

std::vector<double> numbers(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array()) fail(std::string("config key must be an array of numbers: ") + key);
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(std::string("config key must be an array of numbers: ") + key);
    out.push_back(x.get<double>());
  }
  return out;
}

void require(const json& j, std::initializer_list<const char*> keys, Experiment e) {
  for (const char* k : keys) {
    if (!j.contains(k)) fail(std::string(experiment_name(e)) + " needs config key " + k);
  }
}

}  // namespace

const char* experiment_name(Experiment e) {
  for (const auto& [x, name] : kNames) {
    if (x == e) return name;
  }
  return "?";
}

std::optional<Experiment> parse_experiment(const std::string& name) {
  for (const auto& [x, n] : kNames) {
    if (name == n) return x;
  }
  return std::nullopt;
}

std::optional<double> ExperimentConfig::threshold() const {
  if (L) return L;
  if (theta) return 2.0 * std::pow(model.a, 1.5) * *theta / (1.0 - model.p);
  return std::nullopt;
}

ExperimentConfig parse_config(const json& raw) {
  const json& j = raw.is_object() && raw.contains("config") ? raw.at("config") : raw;
  if (!j.is_object()) fail("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) fail("unknown config key: " + key);
  }
  ExperimentConfig c;
  c.model = model_from_json(j);
  if (!j.contains("experiment")) fail("missing config key: experiment");
  const auto e = parse_experiment(text(j, "experiment"));
  if (!e) fail("unknown experiment: " + text(j, "experiment"));
  c.experiment = *e;

  switch (c.experiment) {
    case Experiment::env_topk: require(j, {"k"}, c.experiment); break;
    case Experiment::thm1: require(j, {"replicas"}, c.experiment); break;
    case Experiment::simulate:
    case Experiment::occupation: require(j, {"horizon", "M"}, c.experiment); break;
    case Experiment::renewal: require(j, {"horizon", "M"}, c.experiment); break;
    case Experiment::visits: require(j, {"visits"}, c.experiment); break;
    case Experiment::kproc: require(j, {"gamma", "horizon"}, c.experiment); break;
    default: break;
  }

  if (j.contains("replicas")) c.replicas = count(j, "replicas");
  if (j.contains("L")) c.L = number(j, "L");
  if (j.contains("theta")) c.theta = number(j, "theta");
  if (j.contains("horizon")) c.horizon = number(j, "horizon");
  if (j.contains("scale")) {
    const auto s = parse_scale(text(j, "scale"));
    if (!s) fail("unknown scale: " + text(j, "scale"));
    c.scale = *s;
  }
  if (j.contains("k")) c.k = count(j, "k");
  if (j.contains("M")) c.M = count(j, "M");
  if (j.contains("rank")) c.rank = count(j, "rank");
  if (j.contains("visits")) c.visits = count(j, "visits");
  if (j.contains("engine")) {
    const auto name = text(j, "engine");
    if (name == "naive") c.engine = Engine::naive;
    else if (name == "aggregated") c.engine = Engine::aggregated;
    else fail("unknown engine: " + name);
  }
  if (j.contains("delta")) c.delta = number(j, "delta");
  if (j.contains("eps")) c.eps = number(j, "eps");
  if (j.contains("gamma")) c.gamma = numbers(j, "gamma");
  if (j.contains("q")) c.q = numbers(j, "q");
  if (j.contains("n_max")) c.n_max = static_cast<int>(count(j, "n_max"));
  if (j.contains("fine_tune")) {
    if (!j.at("fine_tune").is_boolean()) fail("config key has the wrong type: fine_tune");
    c.fine_tune = j.at("fine_tune").get<bool>();
  }
  if (j.contains("out")) c.out = text(j, "out");
  if (j.contains("format")) {
    const auto f = text(j, "format");
    if (f == "csv") c.format = Format::csv;
    else if (f == "json") c.format = Format::json;
    else fail("unknown format: " + f);
  }
  if (j.contains("workers")) c.workers = static_cast<unsigned>(count(j, "workers"));
  if (j.contains("budget")) c.budget = count(j, "budget");
  return c;
}

void validate(const ExperimentConfig& c) {
  if (c.L && c.theta) fail("give L or theta, not both");
  if (c.fine_tune && !c.threshold()) fail("fine_tune needs L or theta");
  ExperimentConfig probe = c;
  if (c.fine_tune) probe.model.beta = fine_tuned_beta(c.model, *c.threshold());
  static_cast<void>(derive(probe.model));
  const auto L = c.threshold();
  if (std::fabs(c.model.a - c.model.p) <= 1e-12 && L && *L >= 0.0) fail("a = p requires L < 0");
  if (c.replicas == 0) fail("replicas must be positive");
  if (c.workers == 0) fail("workers must be positive");
  if (c.budget == 0) fail("budget must be positive");
  if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) fail("horizon must be positive and finite");

  switch (c.experiment) {
    case Experiment::env_topk:
      if (c.k == 0 || c.k > (std::uint64_t{1} << c.model.N)) fail("k must lie in [1, 2^N]");
      break;
    case Experiment::env_bins:
      if (!(c.delta > 0.0) || !(c.eps > 0.0) || !(c.delta + c.eps < 0.5)) {
        fail("bins need delta, eps > 0 with delta + eps < 1/2");
      }
      break;
    case Experiment::thm1:
      if (c.replicas < kThm1MinReplicas) fail("thm1 needs at least 30 replicas");
      break;
    case Experiment::gibbs_check:
      if (c.model.N > kExactGeneratorMaxN) fail("gibbs-check supports N <= 12");
      break;
    case Experiment::simulate:
    case Experiment::occupation:
      if (c.M == 0) fail("M must be positive");
      if ((c.scale == Scale::c) && !L && std::fabs(c.model.a - c.model.p) <= 1e-12) {
        fail("scale c with a = p needs L < 0");
      }
      break;
    case Experiment::renewal:
      if (c.M == 0) fail("M must be positive");
      if (!L) fail("renewal needs L or theta");
      break;
    case Experiment::visits:
      if (c.visits < kMinVisitReplicas) fail("visits needs at least 100 sojourns");
      if (c.rank == 0) fail("rank is 1-based");
      if (c.M == 0) fail("M must be positive");
      break;
    case Experiment::kproc:
      if (c.gamma.empty()) fail("gamma must be nonempty");
      for (double g : c.gamma) {
        if (!(g > 0.0) || !std::isfinite(g)) fail("gamma must be positive and finite");
      }
      break;
    case Experiment::kemperman:
      if (c.n_max < 1 || c.n_max > 12) fail("n_max must lie in [1, 12]");
      for (double q : c.q) {
        if (!(q > 0.0 && q < 1.0)) fail("q values must lie in (0, 1)");
      }
      break;
    case Experiment::params: break;
  }
}

json to_json(const ExperimentConfig& c) {
  json j = c.model;
  j["experiment"] = experiment_name(c.experiment);
  j["replicas"] = c.replicas;
  if (c.L) j["L"] = *c.L;
  if (c.theta) j["theta"] = *c.theta;
  j["horizon"] = c.horizon;
  j["scale"] = scale_name(c.scale);
  j["k"] = c.k;
  j["M"] = c.M;
  j["rank"] = c.rank;
  j["visits"] = c.visits;
  j["engine"] = c.engine == Engine::naive ? "naive" : "aggregated";
  j["delta"] = c.delta;
  j["eps"] = c.eps;
  if (!c.gamma.empty()) j["gamma"] = c.gamma;
  if (!c.q.empty()) j["q"] = c.q;
  j["n_max"] = c.n_max;
  j["fine_tune"] = c.fine_tune;
  j["out"] = c.out;
  j["format"] = c.format == Format::csv ? "csv" : "json";
  j["workers"] = c.workers;
  j["budget"] = c.budget;
  return j;
}

}  // namespace grem::cli

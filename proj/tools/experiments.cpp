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

#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "pool.hpp"

namespace grem::cli {
namespace {

namespace fs = std::filesystem;

class Sink {
 public:
  explicit Sink(const ExperimentConfig& c) : dir_(c.out) { fs::create_directories(dir_); }

  template <typename Writer>
  void write(const std::string& name, Writer&& writer) {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + (dir_ / name).string());
    writer(os);
    if (!os) throw std::runtime_error("failed writing " + (dir_ / name).string());
    files_.push_back(name);
  }

  void write_json(const std::string& name, const json& j) {
    write(name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }

  std::vector<std::string> files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

std::string numbered(const char* stem, std::size_t r, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_r%04zu.%s", stem, r, ext);
  return buf;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ModelParams base_model(const ExperimentConfig& c) {
  ModelParams m = c.model;
  if (c.fine_tune) m.beta = fine_tuned_beta(m, *c.threshold());
  return m;
}

ModelParams replica_model(const ExperimentConfig& c, std::size_t r) {
  ModelParams m = base_model(c);
  m.seed = environment_seed(c, r);
  return m;
}

// Inner parallelism only when there is a single replica to fan out.
unsigned inner_workers(const ExperimentConfig& c) { return c.replicas == 1 ? c.workers : 1; }

template <typename Fn>
std::vector<double> timed_replicas(const ExperimentConfig& c, Fn&& fn) {
  std::vector<double> seconds(c.replicas, 0.0);
  parallel_for(c.replicas, c.workers, [&](std::size_t r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn(r);
    seconds[r] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  return seconds;
}

json seed_list(const ExperimentConfig& c, std::uint64_t (*seed)(const ExperimentConfig&, std::size_t)) {
  json out = json::array();
  for (std::size_t r = 0; r < c.replicas; ++r) out.push_back(seed(c, r));
  return out;
}

const char* set_name(const TrackedClass& cls) { return cls.in_I ? "I" : "J"; }

struct Landscape {
  EnergyOracle oracle;
  std::vector<ExtremeRecord> records;
  TrackedSet tracked;
  TimeScales ts;
};

Landscape landscape(const ExperimentConfig& c, std::size_t extra_rank = 0) {
  Landscape l{EnergyOracle(replica_model(c, 0)), {}, {}, {}};
  const std::size_t want = std::max({c.k, extra_rank, 4 * c.M + 8});
  l.records = top_k(l.oracle, std::min<std::size_t>(want, l.oracle.states()), {c.workers, true});
  const auto L = c.threshold();
  l.tracked = L ? make_tracked(l.records, *L, c.M) : track_top(l.records, c.M);
  l.ts = timescales(l.oracle.derived(), L.value_or(std::fabs(c.model.a - c.model.p) <= 1e-12 ? -1.0 : 0.0));
  return l;
}

SimulationOptions sim_options(const ExperimentConfig& c) {
  SimulationOptions o;
  o.engine = c.engine;
  o.scale = c.scale;
  o.L = c.threshold().value_or(0.0);
  o.horizon = c.horizon;
  o.budget = c.budget;
  return o;
}

json tracked_json(const TrackedSet& t) { return json(t); }

Outcome run_params(const ExperimentConfig& c, Sink& sink) {
  Outcome out;
  const auto d = derive(base_model(c));
  out.summary["derived"] = d;
  if (const auto L = c.threshold()) out.summary["timescales"] = timescales(d, *L);
  if (c.format == Format::json) {
    sink.write_json("params.json", out.summary);
  } else {
    sink.write("params.csv", [&](std::ostream& os) {
      os << "key,value\n";
      os << "N1," << d.N1 << "\nN2," << d.N2 << "\nbeta_star," << num(d.beta_star) << "\nkappa,"
         << num(d.kappa) << "\nbar_beta_FT," << num(d.bar_beta_FT) << "\nalpha," << num(d.alpha)
         << "\nlow_temp," << (d.low_temp ? "true" : "false") << "\nft_visible,"
         << (d.ft_visible ? "true" : "false") << '\n';
      if (const auto L = c.threshold()) {
        const auto ts = timescales(d, *L);
        os << "L," << num(ts.L) << "\ntheta," << num(ts.theta) << "\nbeta_FT," << num(ts.beta_FT)
           << "\nlog_c_N," << num(ts.c_N_log) << "\nlog_bar_c_N," << num(ts.bar_c_N_log) << '\n';
      }
    });
  }
  return out;
}

Outcome run_env_topk(const ExperimentConfig& c, Sink& sink) {
  Outcome out;
  std::vector<std::vector<ExtremeRecord>> recs(c.replicas);
  out.replica_seconds = timed_replicas(c, [&](std::size_t r) {
    recs[r] = top_k(EnergyOracle(replica_model(c, r)), c.k, {inner_workers(c), true});
  });
  out.seeds["environment"] = seed_list(c, environment_seed);
  json top = json::array();
  for (std::size_t r = 0; r < c.replicas; ++r) top.push_back(recs[r].front());
  out.summary["rank1"] = top;
  if (c.format == Format::json) {
    json all = json::array();
    for (std::size_t r = 0; r < c.replicas; ++r) all.push_back({{"replica", r}, {"records", recs[r]}});
    sink.write_json("records.json", all);
  } else {
    for (std::size_t r = 0; r < c.replicas; ++r) {
      sink.write(numbered("records", r, "csv"), [&](std::ostream& os) { write_records_csv(os, recs[r]); });
    }
  }
  return out;
}

Outcome run_env_bins(const ExperimentConfig& c, Sink& sink) {
  Outcome out;
  std::vector<std::vector<BinStats>> bins(c.replicas);
  std::vector<int> agree(c.replicas, 0);
  out.replica_seconds = timed_replicas(c, [&](std::size_t r) {
    const EnergyOracle o(replica_model(c, r));
    const TopKOptions opt{inner_workers(c), true};
    bins[r] = bin_scan(o, c.delta, c.eps, opt);
    const auto global = top_k(o, c.k, opt);
    const auto binned = binned_top_k(o, c.delta, c.eps, c.k, opt);
    agree[r] = binned.size() == global.size() &&
               std::equal(global.begin(), global.end(), binned.begin(), [](const auto& x, const auto& y) {
                 return x.sigma1 == y.sigma1 && x.sigma2 == y.sigma2;
               });
  });
  out.seeds["environment"] = seed_list(c, environment_seed);
  std::size_t agreeing = 0;
  for (int a : agree) agreeing += static_cast<std::size_t>(a);
  out.summary["k"] = c.k;
  out.summary["binned_equals_global"] = agreeing;
  out.summary["replicas"] = c.replicas;
  out.summary["agreement_fraction"] = static_cast<double>(agreeing) / static_cast<double>(c.replicas);
  if (c.format == Format::json) {
    json all = json::array();
    for (std::size_t r = 0; r < c.replicas; ++r) {
      all.push_back({{"replica", r}, {"bins", bins[r]}, {"binned_equals_global", agree[r] == 1}});
    }
    sink.write_json("bins.json", all);
  } else {
    for (std::size_t r = 0; r < c.replicas; ++r) {
      sink.write(numbered("bins", r, "csv"), [&](std::ostream& os) { write_bins_csv(os, bins[r]); });
    }
  }
  return out;
}

Outcome run_thm1(const ExperimentConfig& c, Sink& sink) {
  Outcome out;
  std::vector<std::vector<ExtremeRecord>> recs(c.replicas);
  out.replica_seconds = timed_replicas(c, [&](std::size_t r) {
    recs[r] = top_k(EnergyOracle(replica_model(c, r)), 1, {inner_workers(c), true});
  });
  out.seeds["environment"] = seed_list(c, environment_seed);
  const auto d = derive(base_model(c));
  const auto which = std::fabs(c.model.a - c.model.p) <= 1e-12 ? ThmCase::a_equal_p : ThmCase::a_less_p;
  out.summary = thm1_suite(recs, d, which);
  if (c.format == Format::json) {
    json all = json::array();
    for (std::size_t r = 0; r < c.replicas; ++r) all.push_back({{"replica", r}, {"record", recs[r].front()}});
    sink.write_json("rank1.json", all);
  } else {
    sink.write("rank1.csv", [&](std::ostream& os) {
      os << "replica,xi_total,u_inv,w\n";
      for (std::size_t r = 0; r < c.replicas; ++r) {
        const auto& x = recs[r].front();
        os << r << ',' << num(x.xi_total) << ',' << num(x.u_inv) << ',' << num(x.w) << '\n';
      }
    });
  }
  return out;
}

Outcome run_gibbs(const ExperimentConfig& c, Sink& sink) {
  Outcome out;
  std::vector<GeneratorReport> reps(c.replicas);
  out.replica_seconds = timed_replicas(c, [&](std::size_t r) {
    reps[r] = exact_generator(EnergyOracle(replica_model(c, r)));
  });
  out.seeds["environment"] = seed_list(c, environment_seed);
  double worst = 0.0;
  json errors = json::array();
  for (const auto& g : reps) {
    worst = std::max(worst, g.max_relative_error);
    errors.push_back(g.max_relative_error);
  }
  out.summary["max_relative_error"] = worst;
  out.summary["per_replica"] = errors;
  out.summary["within_1e-8"] = worst <= 1e-8;
  for (std::size_t r = 0; r < c.replicas; ++r) {
    const auto& g = reps[r];
    if (c.format == Format::json) {
      sink.write_json(numbered("gibbs", r, "json"),
                      {{"stationary", g.stationary}, {"gibbs", g.gibbs}, {"max_relative_error", g.max_relative_error}});
    } else {
      sink.write(numbered("gibbs", r, "csv"), [&](std::ostream& os) {
        os << "sigma,stationary,gibbs,rel_err\n";
        for (std::size_t s = 0; s < g.stationary.size(); ++s) {
          os << s << ',' << num(g.stationary[s]) << ',' << num(g.gibbs[s]) << ','
             << num(std::fabs(g.stationary[s] / g.gibbs[s] - 1.0)) << '\n';
        }
      });
    }
  }
  return out;
}

void write_occupation(const ExperimentConfig& c, Sink& sink, const TrackedSet& t,
                      const std::vector<TrajectoryReport>& runs) {
  if (c.format == Format::json) {
    json all = json::array();
    for (std::size_t r = 0; r < runs.size(); ++r) all.push_back({{"replica", r}, {"trajectory", runs[r]}});
    sink.write_json("trajectories.json", all);
    return;
  }
  sink.write("occupation.csv", [&](std::ostream& os) {
    os << "replica,rank,sigma1,w,set,occupation,fraction\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
      for (std::size_t k = 0; k < t.size(); ++k) {
        const auto& cls = t.classes[k];
        os << r << ',' << cls.rank << ',' << cls.sigma1 << ',' << num(cls.w) << ',' << set_name(cls) << ','
           << num(runs[r].occupation[k]) << ',' << num(runs[r].fraction(k)) << '\n';
      }
      os << r << ",,,,other," << num(runs[r].other) << ',' << num(runs[r].other_fraction()) << '\n';
    }
  });
}

Outcome run_simulate(const ExperimentConfig& c, Sink& sink, bool summarise) {
  Outcome out;
  const auto land = landscape(c);
  auto opt = sim_options(c);
  opt.record_visits = !summarise;
  std::vector<TrajectoryReport> runs(c.replicas);
  out.replica_seconds = timed_replicas(c, [&](std::size_t r) {
    CounterStream rng(dynamics_seed(c, r));
    runs[r] = simulate(land.oracle, land.tracked, opt, rng);
  });
  out.seeds["environment"] = {environment_seed(c, 0)};
  out.seeds["dynamics"] = seed_list(c, dynamics_seed);
  for (const auto& run : runs) out.incomplete = out.incomplete || run.partial();
  out.summary["tracked"] = tracked_json(land.tracked);
  out.summary["log_scale"] = runs.front().log_scale;
  out.summary["incomplete"] = out.incomplete;

  std::vector<double> log_mean(land.tracked.size());
  double log_total = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < land.tracked.size(); ++k) {
    log_mean[k] = log_expected_sojourn(land.oracle, land.tracked.classes[k].sigma1);
    const double m = std::max(log_total, log_mean[k]);
    log_total = m + std::log(std::exp(log_total - m) + std::exp(log_mean[k] - m));
  }
  json classes = json::array();
  std::vector<Summary> fractions;
  for (std::size_t k = 0; k < land.tracked.size(); ++k) {
    std::vector<double> f;
    for (const auto& run : runs) f.push_back(run.fraction(k));
    const auto s = summarize(f);
    fractions.push_back(s);
    const auto& cls = land.tracked.classes[k];
    classes.push_back({{"rank", cls.rank},
                       {"sigma1", cls.sigma1},
                       {"w", cls.w},
                       {"set", set_name(cls)},
                       {"mean_fraction", s.mean},
                       {"std_error", c.replicas > 1 ? s.std_error() : 0.0},
                       {"predicted_share", std::exp(log_mean[k] - log_total)}});
  }
  std::vector<double> other;
  for (const auto& run : runs) other.push_back(run.other_fraction());
  out.summary["classes"] = classes;
  out.summary["other_fraction"] = summarize(other).mean;

  write_occupation(c, sink, land.tracked, runs);
  if (summarise) {
    if (c.format == Format::csv) {
      sink.write("occupation_summary.csv", [&](std::ostream& os) {
        os << "rank,sigma1,w,set,mean_fraction,std_error,predicted_share\n";
        for (const auto& row : classes) {
          os << row["rank"].get<std::uint64_t>() << ',' << row["sigma1"].get<std::uint64_t>() << ','
             << num(row["w"].get<double>()) << ',' << row["set"].get<std::string>() << ','
             << num(row["mean_fraction"].get<double>()) << ',' << num(row["std_error"].get<double>()) << ','
             << num(row["predicted_share"].get<double>()) << '\n';
        }
      });
    }
  } else if (c.format == Format::csv) {
    for (std::size_t r = 0; r < runs.size(); ++r) {
      sink.write(numbered("visits", r, "csv"),
                 [&](std::ostream& os) { write_visits_csv(os, land.tracked, runs[r].visits); });
    }
  }
  return out;
}

Outcome run_visits(const ExperimentConfig& c, Sink& sink) {
  Outcome out;
  const auto land = landscape(c, c.rank);
  if (c.rank > land.records.size()) throw std::invalid_argument("rank exceeds the configuration count");
  const auto cls = land.tracked.find(land.records[c.rank - 1].sigma1);
  if (!cls) throw std::invalid_argument("rank is not among the tracked classes; raise M or move L");
  std::vector<VisitExperiment> exps(c.replicas);
  out.replica_seconds = timed_replicas(c, [&](std::size_t r) {
    CounterStream rng(dynamics_seed(c, r));
    exps[r] = visit_experiment(land.oracle, land.tracked, *cls, land.ts, c.scale, c.visits, rng, c.budget);
  });
  out.seeds["environment"] = {environment_seed(c, 0)};
  out.seeds["dynamics"] = seed_list(c, dynamics_seed);
  json per = json::array();
  for (const auto& e : exps) {
    out.incomplete = out.incomplete || e.partial;
    per.push_back(e);
  }
  const auto& tc = land.tracked.classes[*cls];
  out.summary["class"] = {{"rank", tc.rank}, {"sigma1", tc.sigma1}, {"xi1", tc.xi1}, {"w", tc.w},
                          {"set", set_name(tc)}};
  out.summary["experiments"] = per;
  out.summary["incomplete"] = out.incomplete;
  for (std::size_t r = 0; r < exps.size(); ++r) {
    if (c.format == Format::json) {
      json vs = exps[r].visits;
      sink.write_json(numbered("visits", r, "json"), vs);
    } else {
      sink.write(numbered("visits", r, "csv"),
                 [&](std::ostream& os) { write_visits_csv(os, land.tracked, exps[r].visits); });
    }
  }
  return out;
}

Outcome run_renewal(const ExperimentConfig& c, Sink& sink) {
  Outcome out;
  const auto land = landscape(c);
  if (land.tracked.I.empty() || land.tracked.J.empty()) {
    throw std::invalid_argument("renewal needs classes on both sides of L; raise M or move L");
  }
  std::vector<RenewalReport> reps(c.replicas);
  out.replica_seconds = timed_replicas(c, [&](std::size_t r) {
    CounterStream rng(dynamics_seed(c, r));
    reps[r] = renewal_experiment(land.oracle, land.tracked, sim_options(c), rng);
  });
  out.seeds["environment"] = {environment_seed(c, 0)};
  out.seeds["dynamics"] = seed_list(c, dynamics_seed);
  json per = json::array();
  for (const auto& rep : reps) {
    out.incomplete = out.incomplete || rep.trajectory.partial();
    per.push_back({{"excursions", rep.excursions}, {"max_identity_error", rep.max_identity_error}});
  }
  out.summary["tracked"] = tracked_json(land.tracked);
  out.summary["replicas"] = per;
  out.summary["incomplete"] = out.incomplete;
  if (c.format == Format::json) {
    json all = json::array();
    for (std::size_t r = 0; r < reps.size(); ++r) all.push_back({{"replica", r}, {"renewal", reps[r]}});
    sink.write_json("renewal.json", all);
  } else {
    sink.write("renewal.csv", [&](std::ostream& os) {
      os << "replica,set,rank,share,share_se,predicted_share,visits_mean,time_mean,closed_form_mean\n";
      for (std::size_t r = 0; r < reps.size(); ++r) {
        auto row = [&](const RenewalTerm& t, const char* set) {
          os << r << ',' << set << ',' << land.tracked.classes[t.cls].rank << ',' << num(t.share.value) << ','
             << num(t.share.std_error) << ',' << num(t.predicted_share) << ',' << num(t.visits.mean) << ','
             << num(t.time.mean) << ',' << num(t.closed_form_mean) << '\n';
        };
        for (const auto& t : reps[r].I) row(t, "I");
        for (const auto& t : reps[r].J) row(t, "J");
      }
    });
  }
  return out;
}

Outcome run_kproc(const ExperimentConfig& c, Sink& sink) {
  Outcome out;
  const auto params = KParams::from(c.gamma);
  const auto pi = k_stationary(params);
  std::vector<KTrajectoryReport> runs(c.replicas);
  auto seed = [&](std::size_t r) { return derive_seed(c.model.seed, r, StreamTag::kprocess); };
  out.replica_seconds = timed_replicas(c, [&](std::size_t r) {
    CounterStream rng(seed(r));
    runs[r] = simulate_k(params, c.horizon, {}, rng);
  });
  json seeds = json::array();
  for (std::size_t r = 0; r < c.replicas; ++r) seeds.push_back(seed(r));
  out.seeds["kprocess"] = seeds;
  double worst = 0.0;
  for (const auto& run : runs) {
    for (std::size_t x = 0; x < params.M; ++x) worst = std::max(worst, std::fabs(run.fraction(x) - pi[x]));
  }
  out.summary["stationary"] = pi;
  out.summary["max_abs_error"] = worst;
  std::vector<std::size_t> levels;
  for (std::size_t m = 1; m <= params.M; ++m) levels.push_back(m);
  const auto rows = truncation_diagnostic(c.gamma, occupation_of_first, levels);
  out.summary["truncation"] = rows;
  if (c.format == Format::json) {
    json all = json::array();
    for (std::size_t r = 0; r < runs.size(); ++r) all.push_back({{"replica", r}, {"trajectory", runs[r]}});
    sink.write_json("kproc.json", all);
  } else {
    sink.write("kproc.csv", [&](std::ostream& os) {
      os << "replica,state,gamma,occupation,fraction,stationary\n";
      for (std::size_t r = 0; r < runs.size(); ++r) {
        for (std::size_t x = 0; x < params.M; ++x) {
          os << r << ',' << x + 1 << ',' << num(c.gamma[x]) << ',' << num(runs[r].occupation[x]) << ','
             << num(runs[r].fraction(x)) << ',' << num(pi[x]) << '\n';
        }
      }
    });
    sink.write("truncation.csv", [&](std::ostream& os) {
      os << "M,value,drift,tail_mass,tail_ratio\n";
      for (const auto& row : rows) {
        os << row.M << ',' << num(row.value) << ',' << num(row.drift) << ',' << num(row.tail_mass) << ','
           << num(row.tail_ratio) << '\n';
      }
    });
  }
  return out;
}

Outcome run_kemperman(const ExperimentConfig& c, Sink& sink) {
  Outcome out;
  const std::vector<double> grid = c.q.empty() ? std::vector<double>{0.01, 0.05, 0.1, 0.3, 0.5, 0.9} : c.q;
  std::vector<KempermanRow> rows;
  double worst = 0.0;
  for (int n = 1; n <= c.n_max; ++n) {
    for (double q : grid) {
      KempermanRow row;
      row.n = n;
      row.q = q;
      const auto in = KempermanInput::from_q(n, q);
      row.lambda = in.lambda;
      row.gf_exact = brute_force_gf(n, q);
      row.gf_formula = kemperman_gf(in);
      row.rel_err = std::fabs(row.gf_formula - row.gf_exact) / row.gf_exact;
      worst = std::max(worst, row.rel_err);
      rows.push_back(row);
    }
  }
  out.summary["rows"] = rows.size();
  out.summary["max_rel_err"] = worst;
  if (c.format == Format::json) {
    json all = json::array();
    for (const auto& r : rows) {
      all.push_back({{"n", r.n}, {"q", r.q}, {"lambda", r.lambda}, {"gf_exact", r.gf_exact},
                     {"gf_formula", r.gf_formula}, {"rel_err", r.rel_err}});
    }
    sink.write_json("kemperman.json", all);
  } else {
    sink.write("kemperman.csv", [&](std::ostream& os) { write_kemperman_csv(os, rows); });
  }
  return out;
}

}  // namespace

std::uint64_t environment_seed(const ExperimentConfig& c, std::size_t r) {
  return derive_seed(c.model.seed, r, StreamTag::environment);
}

std::uint64_t dynamics_seed(const ExperimentConfig& c, std::size_t r) {
  return derive_seed(c.model.seed, r, StreamTag::dynamics);
}

Outcome run_experiment(const ExperimentConfig& c) {
  Sink sink(c);
  Outcome out;
  switch (c.experiment) {
    case Experiment::params: out = run_params(c, sink); break;
    case Experiment::env_topk: out = run_env_topk(c, sink); break;
    case Experiment::env_bins: out = run_env_bins(c, sink); break;
    case Experiment::thm1: out = run_thm1(c, sink); break;
    case Experiment::gibbs_check: out = run_gibbs(c, sink); break;
    case Experiment::simulate: out = run_simulate(c, sink, false); break;
    case Experiment::occupation: out = run_simulate(c, sink, true); break;
    case Experiment::visits: out = run_visits(c, sink); break;
    case Experiment::renewal: out = run_renewal(c, sink); break;
    case Experiment::kproc: out = run_kproc(c, sink); break;
    case Experiment::kemperman: out = run_kemperman(c, sink); break;
  }
  out.files = sink.files();
  return out;
}

}  // namespace grem::cli

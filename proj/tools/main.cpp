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

#include <CLI11.hpp>

#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "config.hpp"
#include "experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kPartial = 2;

grem::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path);
  try {
    return grem::json::parse(in);
  } catch (const grem::json::parse_error& e) {
    throw std::invalid_argument("config " + path + " is not valid JSON: " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grem: extremes and hierarchical hopping dynamics of the two-level GREM"};
  std::string config_path;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> budget;
  std::optional<std::string> format;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON config, or a manifest to replay")->required();
  app.add_option("--out", out, "output directory");
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--budget", budget, "event budget per trajectory")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "data file format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--quiet", quiet, "do not print the summary");
  app.set_version_flag("--version", std::string(grem::kVersion));
  CLI11_PARSE(app, argc, argv);

  grem::cli::ExperimentConfig cfg;
  try {
    cfg = grem::cli::parse_config(read_json(config_path));
    if (out) cfg.out = *out;
    if (workers) cfg.workers = *workers;
    if (budget) cfg.budget = *budget;
    if (format) cfg.format = *format == "json" ? grem::cli::Format::json : grem::cli::Format::csv;
    grem::cli::validate(cfg);
  } catch (const std::exception& e) {
    std::cerr << "grem: " << e.what() << '\n';
    return kInvalid;
  }

  const auto t0 = std::chrono::steady_clock::now();
  grem::cli::Outcome outcome;
  try {
    outcome = grem::cli::run_experiment(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "grem: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "grem: " << cfg.out << ": " << e.what() << '\n';
    return kInvalid;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  grem::json manifest;
  manifest["software"] = {{"name", "grem"}, {"version", grem::kVersion}};
  manifest["config"] = grem::cli::to_json(cfg);
  manifest["seeds"] = outcome.seeds.is_null() ? grem::json::object() : outcome.seeds;
  manifest["wall_seconds"] = {{"total", total}, {"replicas", outcome.replica_seconds}};
  manifest["summary"] = outcome.summary;
  manifest["files"] = outcome.files;
  manifest["incomplete"] = outcome.incomplete;
  {
    std::ofstream os(std::filesystem::path(cfg.out) / "manifest.json");
    os << manifest.dump(2) << '\n';
    if (!os) {
      std::cerr << "grem: cannot write manifest in " << cfg.out << '\n';
      return kInvalid;
    }
  }
  if (!quiet) std::cout << outcome.summary.dump(2) << '\n';
  if (outcome.incomplete) {
    std::cerr << "grem: event budget exhausted; results are partial\n";
    return kPartial;
  }
  return kOk;
}

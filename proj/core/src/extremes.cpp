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

#include "grem/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace grem {
namespace {

struct Candidate {
  double xi;
  std::uint64_t sigma;
};

bool better(const Candidate& x, const Candidate& y) noexcept {
  return x.xi > y.xi || (x.xi == y.xi && x.sigma < y.sigma);
}

// Bounded heap whose front is the worst retained candidate.
class TopKHeap {
 public:
  explicit TopKHeap(std::size_t k) : k_(k) { heap_.reserve(k); }

  bool full() const noexcept { return heap_.size() == k_; }
  const Candidate& worst() const noexcept { return heap_.front(); }

  bool admits(const Candidate& c) const noexcept { return !full() || better(c, worst()); }

  void push(const Candidate& c) {
    if (full()) {
      std::pop_heap(heap_.begin(), heap_.end(), better);
      heap_.back() = c;
    } else {
      heap_.push_back(c);
    }
    std::push_heap(heap_.begin(), heap_.end(), better);
  }

  const std::vector<Candidate>& items() const noexcept { return heap_; }

 private:
  std::size_t k_;
  std::vector<Candidate> heap_;
};

// Upper-tail probability above which a level-2 uniform cannot produce a
// candidate for the heap. Returns > 1 (no pruning) until the heap is full.
double prune_cutoff(const EnergyOracle& oracle, const TopKHeap& heap, double base) {
  if (!heap.full()) return 2.0;
  const double threshold = (heap.worst().xi - base) / oracle.sqrt_1ma();
  const double tail = 0.5 * std::erfc(threshold / std::numbers::sqrt2);
  return tail * (1.0 + 1e-7) + 1e-300;
}

void scan_row(const EnergyOracle& oracle, std::uint64_t sigma1, double x1, TopKHeap& heap,
              bool prune) {
  const std::uint64_t n2 = oracle.second_level_states();
  const bool plain = oracle.hook() == EnvironmentHook::none;
  prune = prune && plain && oracle.sqrt_1ma() > 0.0;
  const double base = oracle.sqrt_a() * x1;
  double cutoff = prune ? prune_cutoff(oracle, heap, base) : 2.0;
  const std::uint64_t row = sigma1 << oracle.derived().N2;
  for (std::uint64_t s2 = 0; s2 < n2; ++s2) {
    const std::uint64_t sigma = row | s2;
    double x2;
    if (plain) {
      const std::uint64_t bits = oracle.raw_bits(Level::second, sigma);
      if (prune && uniform_open_complement(bits) > cutoff) continue;
      x2 = normal_icdf(uniform_open(bits));
    } else {
      x2 = oracle.xi2(sigma);
    }
    const Candidate c{oracle.combine(x1, x2), sigma};
    if (heap.admits(c)) {
      heap.push(c);
      if (prune) cutoff = prune_cutoff(oracle, heap, base);
    }
  }
}

template <typename Work>
void run_partitioned(std::uint64_t n, unsigned workers, Work&& work) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(n, 256))));
  if (workers == 1) {
    work(0u, std::uint64_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = n * w / workers;
    const std::uint64_t hi = n * (w + 1) / workers;
    pool.emplace_back([&work, w, lo, hi] { work(w, lo, hi); });
  }
  for (auto& t : pool) t.join();
}

std::vector<ExtremeRecord> to_records(const EnergyOracle& oracle, std::vector<Candidate> all,
                                      std::size_t k) {
  std::sort(all.begin(), all.end(), better);
  if (all.size() > k) all.resize(k);
  std::vector<ExtremeRecord> out;
  out.reserve(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    out.push_back(make_record(oracle, all[i].sigma, i + 1));
  }
  return out;
}

}  // namespace

ExtremeRecord make_record(const EnergyOracle& oracle, std::uint64_t sigma, std::uint64_t rank) {
  const auto e = oracle.energies(sigma);
  ExtremeRecord r;
  r.rank = rank;
  r.sigma1 = oracle.sigma1_of(sigma);
  r.sigma2 = oracle.sigma2_of(sigma);
  r.xi_total = e.xi;
  r.xi1 = e.xi1;
  r.xi2 = e.xi2;
  r.u_inv = u_unscale(oracle.derived(), e.xi);
  r.w = e.xi1 - oracle.derived().xi1_center();
  return r;
}

std::vector<ExtremeRecord> top_k(const EnergyOracle& oracle, std::size_t k,
                                 const TopKOptions& options) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (oracle.derived().model.N < 64 && k > oracle.states()) {
    throw std::invalid_argument("k exceeds the number of configurations");
  }
  const std::uint64_t n1 = oracle.first_level_states();
  std::vector<TopKHeap> heaps(std::max(1u, options.workers), TopKHeap(k));
  run_partitioned(n1, options.workers, [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t s1 = lo; s1 < hi; ++s1) {
      scan_row(oracle, s1, oracle.xi1(s1), heaps[w], options.prune);
    }
  });
  std::vector<Candidate> all;
  for (const auto& h : heaps) all.insert(all.end(), h.items().begin(), h.items().end());
  return to_records(oracle, std::move(all), k);
}

std::vector<LogWeight> level_sums(const EnergyOracle& oracle,
                                  const std::vector<ExtremeRecord>& records) {
  const auto& d = oracle.derived();
  const double scale = d.model.beta / d.beta_star;
  const std::uint64_t n2 = oracle.second_level_states();
  std::vector<double> logs(n2);
  std::vector<LogWeight> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    const double x1 = oracle.xi1(rec.sigma1);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::uint64_t s2 = 0; s2 < n2; ++s2) {
      const double xi = oracle.combine(x1, oracle.xi2(oracle.compose(rec.sigma1, s2)));
      logs[s2] = scale * u_unscale(d, xi);
      peak = std::max(peak, logs[s2]);
    }
    double acc = 0.0;
    for (double v : logs) acc += std::exp(v - peak);
    LogWeight lw;
    lw.log_value = peak + std::log(acc);
    lw.value = std::exp(lw.log_value);
    out.push_back(lw);
  }
  return out;
}

BinGrid BinGrid::make(const DerivedParams& d, double delta, double eps) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2)");
  const double n = static_cast<double>(d.model.N);
  BinGrid g;
  g.center = d.xi1_center();
  g.width = std::pow(n, -(0.5 + delta));
  g.j_max = static_cast<std::int64_t>(std::floor(std::pow(n, 0.5 + delta + eps)));
  return g;
}

std::optional<std::int64_t> BinGrid::locate(double xi1) const {
  const double pos = std::floor((xi1 - center) / width);
  if (!(std::fabs(pos) <= static_cast<double>(j_max))) return std::nullopt;
  return static_cast<std::int64_t>(pos);
}

double expected_bin_count(const DerivedParams& d, const BinGrid& grid, std::int64_t j) {
  const double lo = grid.center + static_cast<double>(j) * grid.width;
  const double hi = lo + grid.width;
  const double mass = 0.5 * (std::erfc(lo / std::numbers::sqrt2) - std::erfc(hi / std::numbers::sqrt2));
  return std::ldexp(mass, d.N1);
}

namespace {

struct BinScanResult {
  std::vector<std::uint64_t> counts;
  std::vector<std::vector<Candidate>> per_bin;  // sorted best first, at most k each
};

BinScanResult scan_bins(const EnergyOracle& oracle, const BinGrid& grid, std::size_t k,
                        const TopKOptions& options) {
  const std::size_t nbins = static_cast<std::size_t>(2 * grid.j_max + 1);
  const unsigned workers = std::max(1u, options.workers);
  std::vector<std::vector<std::uint64_t>> counts(workers, std::vector<std::uint64_t>(nbins, 0));
  std::vector<std::vector<TopKHeap>> heaps(workers, std::vector<TopKHeap>(nbins, TopKHeap(k)));
  run_partitioned(oracle.first_level_states(), workers,
                  [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
                    for (std::uint64_t s1 = lo; s1 < hi; ++s1) {
                      const double x1 = oracle.xi1(s1);
                      const auto j = grid.locate(x1);
                      if (!j) continue;
                      const auto slot = static_cast<std::size_t>(*j + grid.j_max);
                      ++counts[w][slot];
                      scan_row(oracle, s1, x1, heaps[w][slot], options.prune);
                    }
                  });
  BinScanResult out;
  out.counts.assign(nbins, 0);
  out.per_bin.resize(nbins);
  for (std::size_t b = 0; b < nbins; ++b) {
    std::vector<Candidate> merged;
    for (unsigned w = 0; w < workers; ++w) {
      out.counts[b] += counts[w][b];
      merged.insert(merged.end(), heaps[w][b].items().begin(), heaps[w][b].items().end());
    }
    std::sort(merged.begin(), merged.end(), better);
    if (merged.size() > k) merged.resize(k);
    out.per_bin[b] = std::move(merged);
  }
  return out;
}

}  // namespace

std::vector<BinStats> bin_scan(const EnergyOracle& oracle, double delta, double eps,
                               const TopKOptions& options) {
  const auto grid = BinGrid::make(oracle.derived(), delta, eps);
  const auto scan = scan_bins(oracle, grid, 1, options);
  std::vector<BinStats> bins;
  bins.reserve(scan.counts.size());
  for (std::size_t b = 0; b < scan.counts.size(); ++b) {
    BinStats s;
    s.j = static_cast<std::int64_t>(b) - grid.j_max;
    s.count = scan.counts[b];
    if (!scan.per_bin[b].empty()) s.bin_max = scan.per_bin[b].front().xi;
    s.delta = delta;
    s.eps = eps;
    bins.push_back(s);
  }
  return bins;
}

std::vector<ExtremeRecord> binned_top_k(const EnergyOracle& oracle, double delta, double eps,
                                        std::size_t k, const TopKOptions& options) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  const auto grid = BinGrid::make(oracle.derived(), delta, eps);
  const auto scan = scan_bins(oracle, grid, k, options);
  std::vector<Candidate> all;
  for (const auto& bin : scan.per_bin) all.insert(all.end(), bin.begin(), bin.end());
  return to_records(oracle, std::move(all), k);
}

}  // namespace grem

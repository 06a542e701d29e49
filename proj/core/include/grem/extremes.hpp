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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "grem/energy.hpp"
#include "grem/params.hpp"

namespace grem {

/// One low-lying configuration.
struct ExtremeRecord {
  std::uint64_t rank = 0;  // 1-based
  std::uint64_t sigma1 = 0;
  std::uint64_t sigma2 = 0;
  double xi_total = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double u_inv = 0.0;  // u_N^{-1}(xi_total)
  double w = 0.0;      // xi1 - sqrt(a N) beta_star
};

struct TopKOptions {
  unsigned workers = 1;
  /// Skip the normal quantile for level-2 draws whose uniform already rules
  /// them out. Exact: only the order-preserving transform is avoided.
  bool prune = true;
};

/// The k largest Xi over all 2^N configurations, decreasing; ties go to the
/// smaller configuration index. Memory O(k) per worker.
std::vector<ExtremeRecord> top_k(const EnergyOracle& oracle, std::size_t k,
                                 const TopKOptions& options = {});

/// Builds a record (u_inv and w filled in) for configuration sigma.
ExtremeRecord make_record(const EnergyOracle& oracle, std::uint64_t sigma, std::uint64_t rank);

/// For each record's sigma1: sum over sigma2 of gamma^N(sigma1 sigma2),
/// accumulated by log-sum-exp in fixed sigma2 order.
std::vector<LogWeight> level_sums(const EnergyOracle& oracle,
                                  const std::vector<ExtremeRecord>& records);

/// Histogram cell over the first-level field.
struct BinStats {
  std::int64_t j = 0;
  std::uint64_t count = 0;           ///< C(I_N^j)
  std::optional<double> bin_max;     ///< M_N^j; empty when count == 0
  double delta = 0.0;
  double eps = 0.0;

  bool empty() const noexcept { return !bin_max.has_value(); }
};

/// Geometry of the bins I_N^j = [c + j h, c + (j + 1) h], c = sqrt(aN) beta_star,
/// h = N^{-(1/2 + delta)}, for |j| <= N^{1/2 + delta + eps}.
struct BinGrid {
  double center = 0.0;
  double width = 0.0;
  std::int64_t j_max = 0;

  static BinGrid make(const DerivedParams& d, double delta, double eps);
  /// Bin index of a first-level value, or nullopt outside the scanned range.
  std::optional<std::int64_t> locate(double xi1) const;
};

/// Per-bin counts and maxima, ordered by j. Throws std::invalid_argument
/// unless 0 < eps < 1/2 and delta > 0.
std::vector<BinStats> bin_scan(const EnergyOracle& oracle, double delta, double eps,
                               const TopKOptions& options = {});

/// The k largest Xi among configurations whose first-level field falls in a
/// scanned bin (merge of per-bin top-k lists). Equals top_k whenever every
/// global top-k first-level value lies inside the scanned range.
std::vector<ExtremeRecord> binned_top_k(const EnergyOracle& oracle, double delta, double eps,
                                        std::size_t k, const TopKOptions& options = {});

/// E[C(I_N^j)] = 2^N1 P[Z in I_N^j].
double expected_bin_count(const DerivedParams& d, const BinGrid& grid, std::int64_t j);

}  // namespace grem

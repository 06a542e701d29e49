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

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <vector>

#include "grem/dynamics.hpp"
#include "grem/extremes.hpp"
#include "grem/hitting.hpp"
#include "grem/kprocess.hpp"
#include "grem/params.hpp"
#include "grem/pointproc.hpp"
#include "grem/stats.hpp"

namespace grem {

using json = nlohmann::json;

/// Reads the model keys N, p, a, beta, seed. Missing or mistyped keys throw
/// std::invalid_argument; other keys are left to the caller.
ModelParams model_from_json(const json& j);

void to_json(json& j, const ModelParams& m);
void to_json(json& j, const DerivedParams& d);
void to_json(json& j, const ExtremeRecord& r);
void to_json(json& j, const BinStats& b);
void to_json(json& j, const FitReport& f);
void to_json(json& j, const Summary& s);
void to_json(json& j, const Thm1Report& r);
void to_json(json& j, const TimeScales& ts);
void to_json(json& j, const TrackedSet& t);
void to_json(json& j, const Visit& v);
void to_json(json& j, const TrajectoryReport& r);
void to_json(json& j, const VisitExperiment& v);
void to_json(json& j, const RatioEstimate& r);
void to_json(json& j, const RenewalTerm& t);
void to_json(json& j, const RenewalReport& r);
void to_json(json& j, const KTrajectoryReport& r);
void to_json(json& j, const TruncationRow& r);
void to_json(json& j, const ComparisonReport& r);
void to_json(json& j, const DenominatorReport& r);

/// rank,sigma1,sigma2,xi_total,xi1,xi2,u_inv,w
void write_records_csv(std::ostream& os, const std::vector<ExtremeRecord>& records);
/// j,count,bin_max,delta,eps (bin_max empty for an empty bin)
void write_bins_csv(std::ostream& os, const std::vector<BinStats>& bins);
/// rank,visit_index,psi,upsilon,gamma_vis
void write_visits_csv(std::ostream& os, const TrackedSet& tracked, const std::vector<Visit>& visits);

struct KempermanRow {
  int n = 0;
  double q = 0.0;
  double lambda = 0.0;
  double gf_exact = 0.0;    // distance-chain solve
  double gf_formula = 0.0;  // Beta-integral formula
  double rel_err = 0.0;
};

/// n,q,lambda,gf_exact,gf_formula,rel_err
void write_kemperman_csv(std::ostream& os, const std::vector<KempermanRow>& rows);

}  // namespace grem

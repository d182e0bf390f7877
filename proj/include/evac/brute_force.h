// Copyright 2026 The Evacuation Planner Authors.
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

// Exhaustive solver for tiny instances, independent of the MILP pipeline.
//
// Each bus leaves its depot on trip 1, then alternates pickup -> shelter ->
// pickup ... and may stop only at a shelter (or at the pickup when the
// horizon is a single trip). Times take their smallest feasible values:
// the node reached by trip t gets the departure time plus travel, every
// other node the latest time of trip t. Loads are enumerated per arrival;
// buses are combined by dynamic programming over the vector of people
// collected per pickup.

#ifndef EVAC_BRUTE_FORCE_H_
#define EVAC_BRUTE_FORCE_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "evac/core_model.h"
#include "evac/formulation.h"

namespace evac {

struct OracleLimits {
  double max_search_space = 1e7;  // (|A| + 1)^(|V| T)
  int64_t max_capacity = 4;
  int64_t max_demand = 4;
};

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  // Without bit variables; empty when infeasible.
  EvacuationPlan plan;
  int64_t bus_options = 0;
};

// ResourceExhausted when the instance exceeds `limits`.
absl::StatusOr<OracleResult> BruteForceOracle(
    const EvacuationInstance& instance, const OracleLimits& limits = {});

}  // namespace evac

#endif  // EVAC_BRUTE_FORCE_H_

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


// Additions to the linearized model that keep every integer-feasible plan:
// valid inequalities and aggregate columns for branching.

#ifndef EVAC_MODEL_CUTS_H_
#define EVAC_MODEL_CUTS_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "evac/core_model.h"
#include "evac/milp_problem.h"

namespace evac {

// One row per pickup with positive demand: the arcs entering it must be used
// at least ceil(D_p / Q) times over all buses and trips. Rows are named
// "VISIT_<pickup>". Returns the number of rows added.
absl::StatusOr<int> AddVisitCuts(const Network& network, MilpProblem& problem);

// An integer column equal to the sum of `members`.
struct AggregateColumn {
  int var = 0;
  std::vector<int> members;
};

// For every depot with two or more buses, one integer column per usable
// (arc, trip) counting how many of those buses take the arc on that trip,
// tied to the x variables by an equality row "AGG_<column>". Branching on
// these does not depend on which of the interchangeable buses is which.
absl::StatusOr<std::vector<AggregateColumn>> AddArcAggregates(
    const Network& network, MilpProblem& problem);

// `values` over the original columns, extended with the aggregate columns.
std::vector<double> ExtendWithAggregates(
    std::span<const double> values,
    const std::vector<AggregateColumn>& aggregates);

}  // namespace evac

#endif  // EVAC_MODEL_CUTS_H_

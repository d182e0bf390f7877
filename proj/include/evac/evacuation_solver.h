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

// End-to-end solve: bilinear model, linearization, branch and bound, plan.

#ifndef EVAC_EVACUATION_SOLVER_H_
#define EVAC_EVACUATION_SOLVER_H_

#include <optional>

#include "absl/status/statusor.h"
#include "evac/bnb_solver.h"
#include "evac/core_model.h"
#include "evac/formulation.h"
#include "evac/linearizer.h"
#include "evac/milp_problem.h"

namespace evac {

struct EvacuationSolveOptions {
  LinearizationMode mode = LinearizationMode::kExact;
  BnbConfig bnb;
  // Add the visit-count cuts to the problem handed to branch and bound.
  bool strengthen = true;
  // Offer a constructed route plan as the first incumbent.
  bool heuristic = true;
};

struct EvacuationSolveResult {
  // The linearized model without cuts, as exported to MPS.
  MilpProblem milp;
  SolveStats stats;
  // Present when an incumbent was found; carries the bit variables.
  std::optional<EvacuationPlan> plan;
  double cost = 0.0;
  double evacuation_time = 0.0;
};

// In exact mode every candidate incumbent must also pass CheckPlan against
// the bilinear model and match its bit products within 1e-6. Fails with
// FailedPrecondition when the instance cannot carry its demand.
absl::StatusOr<EvacuationSolveResult> SolveEvacuation(
    const EvacuationInstance& instance,
    const EvacuationSolveOptions& options = {});

}  // namespace evac

#endif  // EVAC_EVACUATION_SOLVER_H_

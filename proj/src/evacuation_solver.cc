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

#include "evac/evacuation_solver.h"

#include "evac/model_cuts.h"
#include "evac/route_heuristic.h"

#include <string>
#include <utility>
#include <vector>

namespace evac {
namespace {

constexpr double kProductTolerance = 1e-6;

}  // namespace

absl::StatusOr<EvacuationSolveResult> SolveEvacuation(
    const EvacuationInstance& instance,
    const EvacuationSolveOptions& options) {
  absl::StatusOr<MibpModel> mibp = BuildMibp(instance);
  if (!mibp.ok()) return mibp.status();
  absl::StatusOr<MilpProblem> milp =
      LinearizeModel(*mibp, instance, options.mode);
  if (!milp.ok()) return milp.status();

  const std::string mode(LinearizationModeName(options.mode));
  const int num_columns = milp->num_variables();
  IncumbentCheck check;
  if (options.mode == LinearizationMode::kExact) {
    check = [&](std::span<const double> values) {
      EvacuationPlan candidate{instance.name, mode,
                               {values.begin(), values.begin() + num_columns}};
      absl::StatusOr<double> residual =
          ProductResidual(mibp->network, candidate);
      if (!residual.ok() || *residual > kProductTolerance) return false;
      absl::StatusOr<FeasibilityReport> report = CheckPlan(*mibp, candidate);
      return report.ok() && report->feasible();
    };
  }

  MilpProblem search_problem = *milp;
  BnbConfig bnb = options.bnb;
  std::vector<AggregateColumn> aggregates;
  if (options.strengthen) {
    absl::StatusOr<int> cuts = AddVisitCuts(mibp->network, search_problem);
    if (!cuts.ok()) return cuts.status();
    absl::StatusOr<std::vector<AggregateColumn>> added =
        AddArcAggregates(mibp->network, search_problem);
    if (!added.ok()) return added.status();
    aggregates = *std::move(added);
    bnb.branch_priority.assign(search_problem.num_variables(), 0);
    for (const AggregateColumn& column : aggregates) {
      bnb.branch_priority[column.var] = 1;
    }
  }
  std::vector<double> start;
  if (options.heuristic) {
    HeuristicOptions heuristic;
    heuristic.seed = options.bnb.seed;
    absl::StatusOr<std::optional<EvacuationPlan>> constructed =
        ConstructPlan(mibp->network, heuristic);
    if (!constructed.ok()) return constructed.status();
    if (constructed->has_value()) {
      absl::StatusOr<EvacuationPlan> lifted =
          ExpandPlanBits(mibp->network, **constructed);
      if (!lifted.ok()) return lifted.status();
      start = ExtendWithAggregates(lifted->values, aggregates);
    }
  }

  absl::StatusOr<MilpResult> solved =
      SolveMilp(search_problem, bnb, check, start);
  if (!solved.ok()) return solved.status();

  EvacuationSolveResult result;
  result.milp = *std::move(milp);
  result.stats = solved->stats;
  if (solved->solution.empty()) return result;

  solved->solution.resize(num_columns);
  EvacuationPlan plan{instance.name, mode, std::move(solved->solution)};
  absl::StatusOr<double> cost = PlanCost(mibp->network, plan);
  if (!cost.ok()) return cost.status();
  absl::StatusOr<std::vector<BusRoute>> routes =
      ExtractRoutes(mibp->network, plan);
  if (!routes.ok()) return routes.status();
  result.cost = *cost;
  result.evacuation_time = EvacuationTime(*routes);
  result.plan = std::move(plan);
  return result;
}

}  // namespace evac

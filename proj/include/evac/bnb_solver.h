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

// LP-based branch and bound for MilpProblem.
//
// Best-bound node selection (ties: deeper first, then creation order),
// most-fractional branching within the highest priority class with
// lowest-index tie-break, a rounding heuristic
// at every node and a periodic fractional dive. Node LPs are warm-started
// from the parent basis and stop early once they exceed the incumbent.
// Every incumbent is snapped to
// integers, its continuous part re-optimized with the integers fixed, and
// verified against all rows and bounds before it is accepted.

#ifndef EVAC_BNB_SOLVER_H_
#define EVAC_BNB_SOLVER_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "evac/milp_problem.h"

namespace evac {

enum class Termination {
  kOptimal,
  kGapReached,
  kTimeLimit,
  kNodeLimit,
  kInfeasible,
};

const char* TerminationName(Termination termination);

struct SolveStats {
  double upper_bound = std::numeric_limits<double>::infinity();
  double lower_bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  int64_t nodes = 0;
  int64_t lp_iterations = 0;
  double wall_seconds = 0.0;
  Termination termination = Termination::kInfeasible;

  bool has_incumbent() const { return upper_bound < kNoIncumbent; }

  static constexpr double kNoIncumbent =
      std::numeric_limits<double>::infinity();
};

// (ub - lb) / (1e-10 + |ub|); infinite without an incumbent.
double RelativeGap(double upper_bound, double lower_bound);

// Percent with two decimals, e.g. 1e-4 -> "0.01 %". "inf" when unbounded.
std::string FormatGap(double gap);

struct BnbConfig {
  double gap_tolerance = 1e-4;
  double time_limit_s = 3600.0;
  // 0 means no limit.
  int64_t node_limit = 0;
  // Orders ties among equally fractional candidates inside the dive.
  uint64_t seed = 0;
  int workers = 1;
  // Nodes between fractional dives; 0 disables them (the root dive too).
  int dive_interval = 256;
  // Per-variable branching priority: fractional variables of the highest
  // priority are branched on first. Empty gives every variable priority 0.
  std::vector<int> branch_priority;
  // Progress lines on stderr.
  bool verbose = false;
};

// Extra acceptance test for candidate incumbents (full variable vector).
using IncumbentCheck = std::function<bool(std::span<const double>)>;

struct MilpResult {
  SolveStats stats;
  // Empty when no incumbent was found.
  std::vector<double> solution;
};

// Fails on invalid problems, an unbounded relaxation or LP breakdown.
// `start`, when it has one value per variable, is offered as the first
// incumbent and goes through the same checks as any other candidate.
absl::StatusOr<MilpResult> SolveMilp(const MilpProblem& problem,
                                     const BnbConfig& config = {},
                                     const IncumbentCheck& check = nullptr,
                                     std::span<const double> start = {});

// Largest g such that every objective coefficient is an integer multiple of
// g, when all objective variables are integer; 0 otherwise. Coefficients
// are tried at up to six decimal places.
double ObjectiveGranularity(const MilpProblem& problem);

}  // namespace evac

#endif  // EVAC_BNB_SOLVER_H_

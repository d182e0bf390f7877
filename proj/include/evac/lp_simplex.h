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

// Bounded-variable simplex for the continuous relaxation of a MilpProblem.
//
// Every row i gets a logical variable s_i = a_i x whose bounds encode the
// row sense, so the working system is A x - s = 0 with box bounds on all
// n + m variables. A warm-start basis that is dual feasible (after flipping
// boxed variables) is optimized by the dual simplex; otherwise the primal
// simplex runs a composite phase 1 on the sum of bound violations and then
// phase 2. Both use Harris ratio tests; the primal switches from Dantzig
// pricing to Bland's rule after a run of degenerate pivots. The basis is
// kept as a BasisFactor refactorized at a fixed interval.

#ifndef EVAC_LP_SIMPLEX_H_
#define EVAC_LP_SIMPLEX_H_

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "evac/milp_problem.h"

namespace evac {

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  // The dual simplex proved the optimum exceeds the objective cutoff.
  kCutoff,
};

const char* LpStatusName(LpStatus status);

enum class BasisStatus : uint8_t { kBasic, kAtLower, kAtUpper, kFree };

// Status of the n structural variables followed by the m row logicals.
struct LpBasis {
  std::vector<BasisStatus> status;
};

struct LpOptions {
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-7;
  double pivot_tolerance = 1e-9;
  // 0 picks a limit from the problem size.
  int64_t iteration_limit = 0;
  int refactor_interval = 100;
  int degenerate_pivots_before_bland = 50;
  bool scale = true;
  int max_refactor_retries = 3;
  // Try the dual simplex first on warm starts whose basis allows it. It
  // stalls on highly degenerate models, so it is off unless requested.
  bool dual = false;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> primal;        // n structurals
  std::vector<double> row_activity;  // m rows
  std::vector<double> row_duals;     // m rows
  std::vector<double> reduced_costs; // n structurals
  LpBasis basis;
  int64_t iterations = 0;
  // Sum of bound violations left when phase 1 stopped (0 when feasible).
  double infeasibility = 0.0;
};

struct Phase1Result {
  bool feasible = false;
  double infeasibility = 0.0;
  std::vector<double> primal;
  LpBasis basis;
  int64_t iterations = 0;
};

class SimplexEngine;

// Holds the scaled constraint matrix of one problem; bounds and the starting
// basis can change between solves. Not thread-safe; use one per worker.
class LpSolver {
 public:
  explicit LpSolver(const MilpProblem& problem, LpOptions options = {});
  ~LpSolver();
  LpSolver(LpSolver&&) noexcept;
  LpSolver& operator=(LpSolver&&) noexcept;

  int num_variables() const;
  int num_rows() const;

  // Later solves may stop with kCutoff once the dual simplex proves the
  // objective exceeds `cutoff`. Infinity disables the test.
  void set_objective_cutoff(double cutoff);

  // Integrality is ignored. `hint` is used when it has n + m entries with
  // exactly m basic ones and a nonsingular basis.
  absl::StatusOr<LpSolution> Solve(const LpBasis* hint = nullptr);
  absl::StatusOr<LpSolution> Solve(std::span<const double> lower,
                                   std::span<const double> upper,
                                   const LpBasis* hint = nullptr);

  absl::StatusOr<Phase1Result> FindFeasibleBasis(
      std::span<const double> lower, std::span<const double> upper);

 private:
  std::unique_ptr<SimplexEngine> engine_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> row_lower_;
  std::vector<double> row_upper_;
  double cutoff_ = std::numeric_limits<double>::infinity();
};

absl::StatusOr<LpSolution> SolveLp(const MilpProblem& problem,
                                   const LpOptions& options = {});

absl::StatusOr<Phase1Result> Phase1Feasibility(const MilpProblem& problem,
                                               const LpOptions& options = {});

}  // namespace evac

#endif  // EVAC_LP_SIMPLEX_H_

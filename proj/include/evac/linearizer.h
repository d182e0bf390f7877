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

// Exact MILP reformulation of the bilinear model: each load b is expanded in
// bits y_n, and each product 2^n * T * y_n becomes a bounded variable v_n
// tied to its factors by linear rows.
//
// Two envelopes are available:
//   kExact          w <= U y, w <= x, w >= x - U (1 - y), w >= 0
//   kPaperVerbatim  y - 1 <= w <= U y, 0 <= w <= U
// The second one never ties w to x when y = 1, so it is a relaxation of the
// product; it is kept for comparison runs.

#ifndef EVAC_LINEARIZER_H_
#define EVAC_LINEARIZER_H_

#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "evac/binary_expansion.h"
#include "evac/core_model.h"
#include "evac/formulation.h"
#include "evac/milp_problem.h"

namespace evac {

enum class LinearizationMode { kExact, kPaperVerbatim };

std::string_view LinearizationModeName(LinearizationMode mode);
// Accepts "exact" and "paper-verbatim".
absl::StatusOr<LinearizationMode> ParseLinearizationMode(std::string_view name);

// coef_x * x + coef_y * y + coef_w * w  (sense)  rhs
struct ProductRow {
  double coef_x = 0.0;
  double coef_y = 0.0;
  double coef_w = 0.0;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;

  bool Holds(double x, double y, double w, double tolerance) const;
};

// Rows linearizing w = x * y for x in [0, upper] and binary y.
absl::StatusOr<std::vector<ProductRow>> LinearizeProduct(
    double upper, LinearizationMode mode);

// Variables follow VariableSpace(network, with_bits=true) positions. Single
// variable product rows become variable bounds. The dose rows are omitted
// when the dose limit is infinite.
absl::StatusOr<MilpProblem> LinearizeModel(const MibpModel& mibp,
                                           const EvacuationInstance& instance,
                                           LinearizationMode mode);

// Largest of |b - sum_n 2^n y_n| and |v_n - 2^n T y_n| over all service
// nodes, buses and trips. `plan` must carry the bit variables.
absl::StatusOr<double> ProductResidual(const Network& network,
                                       const EvacuationPlan& plan);

// Lifts a plan without bit variables into the space with them: y holds the
// binary expansion of each b and v_n = 2^n T y_n. Fails when a load is not
// an integer in [0, Q].
absl::StatusOr<EvacuationPlan> ExpandPlanBits(const Network& network,
                                              const EvacuationPlan& plan);

}  // namespace evac

#endif  // EVAC_LINEARIZER_H_

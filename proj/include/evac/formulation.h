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

// The bilinear bus-evacuation model as explicit constraint records, plus
// plan evaluation against it.
//
// Constraint families, by equation id:
//   EQ1   dose per (pickup, bus): escape dose summed over every shelter plus
//         waiting dose eta_i * T_i * b_i (the only bilinear family)
//   EQ2   T_j(t+1) >= T_i(t) + travel_ij * x_ij(t) for every node pair
//   EQ3   flow balance at pickups, EQ4 at shelters (may stop there)
//   EQ5   at most one arc per trip
//   EQ6   first trip leaves the home depot, EQ7 never leave a depot later
//   EQ8   the last trip does not go shelter -> pickup
//   EQ9   load changes only where the bus arrived
//   EQ10  cumulative onboard count within [0, Q] (two records per bus/trip)
//   EQ11  every pickup is emptied, EQ12 everyone picked is dropped
//   EQ13-15  x binary, b nonnegative integer, T nonnegative

#ifndef EVAC_FORMULATION_H_
#define EVAC_FORMULATION_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "evac/core_model.h"
#include "evac/milp_problem.h"

namespace evac {

enum class Equation {
  kEq1 = 1,
  kEq2,
  kEq3,
  kEq4,
  kEq5,
  kEq6,
  kEq7,
  kEq8,
  kEq9,
  kEq10,
  kEq11,
  kEq12,
  kEq13,
  kEq14,
  kEq15,
};

inline constexpr int kNumEquations = 15;

std::string EquationName(Equation equation);

// Domain records (EQ13-15) restrict a single variable.
enum class Domain { kNone, kBinary, kNonnegativeInteger, kNonnegative };

struct BilinearTerm {
  int left = 0;
  int right = 0;
  double coef = 0.0;
};

struct ConstraintRecord {
  Equation equation = Equation::kEq1;
  std::string name;
  std::vector<Term> linear;
  std::vector<BilinearTerm> bilinear;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  Domain domain = Domain::kNone;
};

struct MibpModel {
  Network network;
  VariableSpace space;  // without bits
  std::vector<Term> objective;
  std::vector<ConstraintRecord> constraints;

  int FamilySize(Equation equation) const;
};

// Fails with FailedPrecondition "insufficient transport volume" when total
// demand exceeds |V| * T * Q.
absl::StatusOr<MibpModel> BuildMibp(const EvacuationInstance& instance);

// Values of one solution. `values` follows a VariableSpace of the same
// network, with or without the bit variables.
struct EvacuationPlan {
  std::string instance;
  std::string mode;
  std::vector<double> values;
};

struct PlanViolation {
  Equation equation = Equation::kEq1;
  std::string constraint;
  double lhs = 0.0;
  RowSense sense = RowSense::kLessEqual;
  double bound = 0.0;
};

struct FeasibilityReport {
  std::vector<PlanViolation> violations;
  bool feasible() const { return violations.empty(); }
};

struct CheckOptions {
  // Absolute slack allowed on rows; domains are checked exactly.
  double tolerance = 1e-6;
};

absl::StatusOr<FeasibilityReport> CheckPlan(const MibpModel& model,
                                            const EvacuationPlan& plan,
                                            const CheckOptions& options = {});
absl::StatusOr<FeasibilityReport> CheckPlan(const EvacuationInstance& instance,
                                            const EvacuationPlan& plan,
                                            const CheckOptions& options = {});

struct DoseEntry {
  std::string pickup;
  std::string bus;
  double dose = 0.0;
};

// Left side of EQ1 per (pickup, bus), pickups outer, buses inner.
absl::StatusOr<std::vector<DoseEntry>> ComputeDoses(
    const Network& network, const EvacuationPlan& plan);

struct RouteLeg {
  int trip = 0;  // 1-based
  bool idle = true;
  std::string from;
  std::string to;
  double depart = 0.0;
  double arrive = 0.0;
  double load_before = 0.0;
  double load_after = 0.0;
};

struct BusRoute {
  std::string bus;
  std::vector<RouteLeg> legs;
};

// Legs are timed by accumulating travel times from t = 0; loads are the
// cumulative pickups minus drop-offs. Fails when a trip has several arcs.
absl::StatusOr<std::vector<BusRoute>> ExtractRoutes(
    const Network& network, const EvacuationPlan& plan);

// Sum of travel_ij * x_ij over all buses and trips.
absl::StatusOr<double> PlanCost(const Network& network,
                                const EvacuationPlan& plan);

// Latest arrival over all non-idle legs.
double EvacuationTime(const std::vector<BusRoute>& routes);

}  // namespace evac

#endif  // EVAC_FORMULATION_H_

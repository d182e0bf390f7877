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

#include <random>

#include "evac/brute_force.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace evac {
namespace {

EvacuationSolveOptions Exhaustive() {
  EvacuationSolveOptions options;
  options.bnb.gap_tolerance = 0.0;
  return options;
}

TEST(EvacuationSolverTest, T1ExactMode) {
  absl::StatusOr<EvacuationSolveResult> r =
      SolveEvacuation(testing::T1Instance(), Exhaustive());
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->stats.termination, Termination::kOptimal);
  EXPECT_EQ(r->stats.gap, 0.0);
  ASSERT_TRUE(r->plan.has_value());
  EXPECT_DOUBLE_EQ(r->cost, 26.0);
  EXPECT_DOUBLE_EQ(r->evacuation_time, 26.0);
  absl::StatusOr<FeasibilityReport> report =
      CheckPlan(testing::T1Instance(), *r->plan);
  ASSERT_TRUE(report.ok());
  EXPECT_TRUE(report->feasible());
}

TEST(EvacuationSolverTest, InsufficientVolumeIsFailedPrecondition) {
  EvacuationInstance inst = testing::T1Instance();
  inst.demand["p"] = 100;
  EXPECT_EQ(SolveEvacuation(inst).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(EvacuationSolverTest, AgreesWithOracleOnTinyInstances) {
  std::mt19937_64 rng(321);
  int feasible = 0;
  for (int k = 0; k < 60; ++k) {
    const EvacuationInstance inst = testing::RandomTinyInstance(rng);
    absl::StatusOr<OracleResult> oracle = BruteForceOracle(inst);
    ASSERT_TRUE(oracle.ok());
    absl::StatusOr<EvacuationSolveResult> r = SolveEvacuation(inst, Exhaustive());
    if (!r.ok()) {
      EXPECT_EQ(r.status().code(), absl::StatusCode::kFailedPrecondition);
      EXPECT_FALSE(oracle->feasible);
      continue;
    }
    if (!oracle->feasible) {
      EXPECT_EQ(r->stats.termination, Termination::kInfeasible) << "case " << k;
      continue;
    }
    ++feasible;
    ASSERT_EQ(r->stats.termination, Termination::kOptimal) << "case " << k;
    EXPECT_EQ(r->cost, oracle->objective) << "case " << k;
  }
  EXPECT_GT(feasible, 10);
}

// The cuts, aggregate columns and constructed start only speed things up.
TEST(EvacuationSolverTest, PlainSearchGivesTheSameCost) {
  std::mt19937_64 rng(654);
  EvacuationSolveOptions plain = Exhaustive();
  plain.strengthen = false;
  plain.heuristic = false;
  int compared = 0;
  for (int k = 0; k < 40; ++k) {
    EvacuationInstance inst = testing::RandomTinyInstance(rng);
    inst.buses.push_back({"extra", inst.buses.front().depot});
    absl::StatusOr<EvacuationSolveResult> a = SolveEvacuation(inst, Exhaustive());
    absl::StatusOr<EvacuationSolveResult> b = SolveEvacuation(inst, plain);
    ASSERT_EQ(a.ok(), b.ok());
    if (!a.ok()) continue;
    ASSERT_EQ(a->stats.termination, b->stats.termination) << "case " << k;
    if (!a->plan.has_value()) continue;
    ++compared;
    EXPECT_EQ(a->cost, b->cost) << "case " << k;
    EXPECT_EQ(a->milp.num_variables(), b->milp.num_variables());
  }
  EXPECT_GT(compared, 10);
}

TEST(EvacuationSolverTest, LongerHorizonsMatchTheOracle) {
  std::mt19937_64 rng(987);
  int feasible = 0;
  for (int k = 0; k < 20; ++k) {
    EvacuationInstance inst = testing::RandomTinyInstance(rng);
    inst.trips = 4 + k % 2;
    inst.buses.resize(1);
    absl::StatusOr<OracleResult> oracle = BruteForceOracle(inst);
    ASSERT_TRUE(oracle.ok());
    absl::StatusOr<EvacuationSolveResult> r = SolveEvacuation(inst, Exhaustive());
    if (!r.ok()) {
      EXPECT_FALSE(oracle->feasible);
      continue;
    }
    ASSERT_EQ(r->plan.has_value(), oracle->feasible) << "case " << k;
    if (!oracle->feasible) continue;
    ++feasible;
    EXPECT_EQ(r->cost, oracle->objective) << "case " << k;
  }
  EXPECT_GT(feasible, 5);
}

}  // namespace
}  // namespace evac

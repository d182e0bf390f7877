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

#include "evac/bnb_solver.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "test_support.h"

namespace evac {
namespace {

MilpProblem SmallKnapsack() {
  MilpProblem p;
  p.AddVariable({"x", 0.0, 2.0, VarType::kInteger, -1.0});
  p.AddVariable({"y", 0.0, 2.0, VarType::kInteger, -1.0});
  p.AddRow({"cap", RowSense::kLessEqual, {{0, 2.0}, {1, 2.0}}, 5.0});
  return p;
}

// Integer optimum by enumerating the integer box; continuous variables are
// not allowed here.
double EnumerateIntegerBox(const MilpProblem& p) {
  const int n = p.num_variables();
  std::vector<double> x(n);
  double best = std::numeric_limits<double>::infinity();
  auto rec = [&](auto&& self, int j) -> void {
    if (j == n) {
      if (MaxViolation(p, x) <= 1e-9) best = std::min(best, ObjectiveValue(p, x));
      return;
    }
    for (double v = p.variables[j].lower; v <= p.variables[j].upper; v += 1.0) {
      x[j] = v;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  return best;
}

TEST(BnbSolverTest, SmallKnapsack) {
  absl::StatusOr<MilpResult> r = SolveMilp(SmallKnapsack(), {.gap_tolerance = 0});
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->stats.termination, Termination::kOptimal);
  EXPECT_DOUBLE_EQ(r->stats.upper_bound, -2.0);
  EXPECT_EQ(r->stats.gap, 0.0);
  ASSERT_EQ(r->solution.size(), 2u);
  EXPECT_DOUBLE_EQ(r->solution[0] + r->solution[1], 2.0);
}

TEST(BnbSolverTest, ZeroTimeLimitProcessesNoNodes) {
  absl::StatusOr<MilpResult> r =
      SolveMilp(SmallKnapsack(), {.time_limit_s = 0.0});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->stats.termination, Termination::kTimeLimit);
  EXPECT_EQ(r->stats.nodes, 0);
  EXPECT_FALSE(r->stats.has_incumbent());
  EXPECT_TRUE(r->solution.empty());
}

TEST(BnbSolverTest, InfeasibleProblem) {
  MilpProblem p;
  p.AddVariable({"x", 0.0, 3.0, VarType::kInteger, 1.0});
  p.AddRow({"a", RowSense::kGreaterEqual, {{0, 2.0}}, 3.0});
  p.AddRow({"b", RowSense::kLessEqual, {{0, 2.0}}, 3.9});
  absl::StatusOr<MilpResult> r = SolveMilp(p);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->stats.termination, Termination::kInfeasible);
  EXPECT_FALSE(r->stats.has_incumbent());
}

TEST(BnbSolverTest, UnboundedRelaxationIsAnError) {
  MilpProblem p;
  p.AddVariable({"x", 0.0, kInfinity, VarType::kInteger, -1.0});
  EXPECT_FALSE(SolveMilp(p).ok());
}

TEST(BnbSolverTest, StopsAtKnownBound) {
  // LP bound 9999, integer optimum 10000: relative gap 1e-4.
  MilpProblem p;
  p.AddVariable({"x", 0.0, 5.0, VarType::kInteger, 10000.0});
  p.AddVariable({"w", 0.0, 1.0, VarType::kContinuous, 1.0});
  p.AddRow({"floor", RowSense::kGreaterEqual, {{0, 1.0}}, 0.9999});
  absl::StatusOr<MilpResult> r = SolveMilp(p, {.gap_tolerance = 1e-4});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->stats.termination, Termination::kGapReached);
  EXPECT_DOUBLE_EQ(r->stats.upper_bound, 10000.0);
  EXPECT_NEAR(r->stats.lower_bound, 9999.0, 1e-6);
  EXPECT_EQ(FormatGap(r->stats.gap), "0.01 %");
}

TEST(BnbSolverTest, GapFormula) {
  EXPECT_DOUBLE_EQ(RelativeGap(10.0, 10.0), 0.0);
  EXPECT_NEAR(RelativeGap(100.0, 99.0), 0.01, 1e-12);
  EXPECT_EQ(RelativeGap(0.0, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(RelativeGap(kInfinity, 1.0)));
  EXPECT_EQ(FormatGap(0.0), "0.00 %");
  EXPECT_EQ(FormatGap(0.0123), "1.23 %");
  EXPECT_EQ(FormatGap(kInfinity), "inf");
}

TEST(BnbSolverTest, Granularity) {
  MilpProblem p;
  p.AddVariable({"a", 0.0, 1.0, VarType::kBinary, 0.25});
  p.AddVariable({"b", 0.0, 1.0, VarType::kBinary, 1.5});
  EXPECT_DOUBLE_EQ(ObjectiveGranularity(p), 0.25);
  p.AddVariable({"c", 0.0, 1.0, VarType::kContinuous, 1.0});
  EXPECT_EQ(ObjectiveGranularity(p), 0.0);
  p.variables[2].objective = 0.0;
  p.variables[0].objective = 1.0 / 3.0;
  EXPECT_EQ(ObjectiveGranularity(p), 0.0);
}

TEST(BnbSolverTest, CheckCallbackRejectsCandidates) {
  int calls = 0;
  // Reject every candidate with x = y so the optimum moves to (2, 0).
  IncumbentCheck check = [&calls](std::span<const double> v) {
    ++calls;
    return v[0] != v[1];
  };
  absl::StatusOr<MilpResult> r =
      SolveMilp(SmallKnapsack(), {.gap_tolerance = 0}, check);
  ASSERT_TRUE(r.ok());
  EXPECT_GT(calls, 0);
  EXPECT_DOUBLE_EQ(r->stats.upper_bound, -2.0);
  EXPECT_NE(r->solution[0], r->solution[1]);
}

// Property: random pure-integer programs agree with enumeration of the box.
TEST(BnbSolverTest, MatchesIntegerEnumeration) {
  std::mt19937_64 rng(99);
  int solved = 0;
  for (int k = 0; k < 80; ++k) {
    MilpProblem p = testing::RandomBoxedLp(rng, 1 + k % 5, 1 + k % 4);
    for (Variable& v : p.variables) v.type = VarType::kInteger;
    const double expected = EnumerateIntegerBox(p);
    for (int workers : {1, 3}) {
      absl::StatusOr<MilpResult> r =
          SolveMilp(p, {.gap_tolerance = 0, .workers = workers});
      ASSERT_TRUE(r.ok()) << r.status();
      if (std::isinf(expected)) {
        EXPECT_EQ(r->stats.termination, Termination::kInfeasible);
      } else {
        EXPECT_EQ(r->stats.termination, Termination::kOptimal);
        EXPECT_NEAR(r->stats.upper_bound, expected, 1e-9) << "case " << k;
        EXPECT_LE(r->stats.gap, 0.0);
        ++solved;
      }
    }
  }
  EXPECT_GT(solved, 60);
}

TEST(BnbSolverTest, SingleWorkerIsDeterministic) {
  std::mt19937_64 rng(5);
  MilpProblem p = testing::RandomBoxedLp(rng, 8, 6);
  for (Variable& v : p.variables) v.type = VarType::kInteger;
  absl::StatusOr<MilpResult> a = SolveMilp(p, {.gap_tolerance = 0, .seed = 3});
  absl::StatusOr<MilpResult> b = SolveMilp(p, {.gap_tolerance = 0, .seed = 3});
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->stats.nodes, b->stats.nodes);
  EXPECT_EQ(a->stats.lp_iterations, b->stats.lp_iterations);
  EXPECT_EQ(a->stats.upper_bound, b->stats.upper_bound);
  EXPECT_EQ(a->stats.lower_bound, b->stats.lower_bound);
  EXPECT_EQ(a->solution, b->solution);
}

TEST(BnbSolverTest, NodeLimit) {
  std::mt19937_64 rng(17);
  MilpProblem p = testing::RandomBoxedLp(rng, 9, 8);
  for (Variable& v : p.variables) v.type = VarType::kInteger;
  absl::StatusOr<MilpResult> r =
      SolveMilp(p, {.gap_tolerance = 0, .node_limit = 1, .dive_interval = 0});
  ASSERT_TRUE(r.ok());
  EXPECT_LE(r->stats.nodes, 1);
}

TEST(BnbSolverTest, StartSolutionBecomesTheIncumbent) {
  const std::vector<double> start = {2.0, 0.0};
  absl::StatusOr<MilpResult> r = SolveMilp(
      SmallKnapsack(), {.node_limit = 1, .dive_interval = 0}, nullptr, start);
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r->stats.upper_bound, -2.0);
  EXPECT_EQ(r->solution, start);
}

TEST(BnbSolverTest, InfeasibleStartIsIgnored) {
  const std::vector<double> start = {2.0, 2.0};
  int calls = 0;
  IncumbentCheck check = [&calls](std::span<const double>) {
    ++calls;
    return true;
  };
  absl::StatusOr<MilpResult> r =
      SolveMilp(SmallKnapsack(), {.gap_tolerance = 0}, check, start);
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r->stats.upper_bound, -2.0);
  EXPECT_LE(r->solution[0] + r->solution[1], 2.0);
}

TEST(BnbSolverTest, PriorityNeedsOneEntryPerVariable) {
  BnbConfig config;
  config.branch_priority = {1};
  EXPECT_EQ(SolveMilp(SmallKnapsack(), config).status().code(),
            absl::StatusCode::kInvalidArgument);
}

// Property: any branching priority leaves the optimum unchanged.
TEST(BnbSolverTest, PrioritiesKeepTheOptimum) {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> level(0, 2);
  int solved = 0;
  for (int k = 0; k < 60; ++k) {
    MilpProblem p = testing::RandomBoxedLp(rng, 2 + k % 5, 1 + k % 4);
    for (Variable& v : p.variables) v.type = VarType::kInteger;
    const double expected = EnumerateIntegerBox(p);
    BnbConfig config;
    config.gap_tolerance = 0;
    for (int j = 0; j < p.num_variables(); ++j) {
      config.branch_priority.push_back(level(rng));
    }
    absl::StatusOr<MilpResult> r = SolveMilp(p, config);
    ASSERT_TRUE(r.ok()) << r.status();
    if (std::isinf(expected)) {
      EXPECT_EQ(r->stats.termination, Termination::kInfeasible);
      continue;
    }
    ++solved;
    EXPECT_NEAR(r->stats.upper_bound, expected, 1e-9) << "case " << k;
  }
  EXPECT_GT(solved, 40);
}

}  // namespace
}  // namespace evac

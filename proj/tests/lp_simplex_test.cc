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

#include "evac/lp_simplex.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "test_support.h"

namespace evac {
namespace {

constexpr double kRelTol = 1e-8;
constexpr double kSlacknessTol = 1e-6;

MilpProblem TwoVarLp() {
  MilpProblem lp;
  lp.AddVariable({"x", 0.0, kInfinity, VarType::kContinuous, -3.0});
  lp.AddVariable({"y", 0.0, kInfinity, VarType::kContinuous, -2.0});
  lp.AddRow({"sum", RowSense::kLessEqual, {{0, 1.0}, {1, 1.0}}, 4.0});
  lp.AddRow({"xcap", RowSense::kLessEqual, {{0, 1.0}}, 2.0});
  lp.AddRow({"ycap", RowSense::kLessEqual, {{1, 1.0}}, 3.0});
  return lp;
}

// min -3/4 x4 + 20 x5 - 1/2 x6 + 6 x7, a classic cycling example for the
// textbook ratio rule.
MilpProblem BealeLp() {
  MilpProblem lp;
  lp.AddVariable({"x4", 0.0, kInfinity, VarType::kContinuous, -0.75});
  lp.AddVariable({"x5", 0.0, kInfinity, VarType::kContinuous, 20.0});
  lp.AddVariable({"x6", 0.0, kInfinity, VarType::kContinuous, -0.5});
  lp.AddVariable({"x7", 0.0, kInfinity, VarType::kContinuous, 6.0});
  lp.AddRow({"r1", RowSense::kLessEqual,
             {{0, 0.25}, {1, -8.0}, {2, -1.0}, {3, 9.0}}, 0.0});
  lp.AddRow({"r2", RowSense::kLessEqual,
             {{0, 0.5}, {1, -12.0}, {2, -0.5}, {3, 3.0}}, 0.0});
  lp.AddRow({"r3", RowSense::kLessEqual, {{2, 1.0}}, 1.0});
  return lp;
}

bool Close(double a, double b) {
  return std::abs(a - b) <= kRelTol * std::max(1.0, std::abs(b));
}

// Primal feasibility, dual sign conditions and complementary slackness.
void ExpectOptimalityConditions(const MilpProblem& lp, const LpSolution& s) {
  EXPECT_LE(MaxViolation(lp, s.primal), 1e-7);
  for (int i = 0; i < lp.num_rows(); ++i) {
    const Row& row = lp.rows[i];
    const double y = s.row_duals[i];
    const double slack = s.row_activity[i] - row.rhs;
    EXPECT_LE(std::abs(y * slack), kSlacknessTol) << row.name;
    if (row.sense == RowSense::kLessEqual) EXPECT_LE(y, 1e-7) << row.name;
    if (row.sense == RowSense::kGreaterEqual) EXPECT_GE(y, -1e-7) << row.name;
  }
  for (int j = 0; j < lp.num_variables(); ++j) {
    const Variable& v = lp.variables[j];
    const double d = s.reduced_costs[j];
    const double x = s.primal[j];
    if (d > 1e-6) {
      EXPECT_NEAR(x, v.lower, 1e-6) << v.name;
    }
    if (d < -1e-6) {
      EXPECT_NEAR(x, v.upper, 1e-6) << v.name;
    }
  }
}

TEST(LpSimplexTest, TwoVariableVertex) {
  const MilpProblem lp = TwoVarLp();
  absl::StatusOr<LpSolution> s = SolveLp(lp);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(s->status, LpStatus::kOptimal);
  EXPECT_NEAR(s->objective, -10.0, 1e-9);
  EXPECT_NEAR(s->primal[0], 2.0, 1e-9);
  EXPECT_NEAR(s->primal[1], 2.0, 1e-9);
  ExpectOptimalityConditions(lp, *s);
}

TEST(LpSimplexTest, ContradictoryRowsAreInfeasible) {
  MilpProblem lp;
  lp.AddVariable({"x", -kInfinity, kInfinity, VarType::kContinuous, 1.0});
  lp.AddRow({"le", RowSense::kLessEqual, {{0, 1.0}}, 1.0});
  lp.AddRow({"ge", RowSense::kGreaterEqual, {{0, 1.0}}, 2.0});
  absl::StatusOr<LpSolution> s = SolveLp(lp);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(s->status, LpStatus::kInfeasible);
  EXPECT_GT(s->infeasibility, 0.0);
}

TEST(LpSimplexTest, UnboundedRay) {
  MilpProblem lp;
  lp.AddVariable({"x", 0.0, kInfinity, VarType::kContinuous, -1.0});
  absl::StatusOr<LpSolution> s = SolveLp(lp);
  ASSERT_TRUE(s.ok()) << s.status();
  EXPECT_EQ(s->status, LpStatus::kUnbounded);
}

TEST(LpSimplexTest, UnboundedThroughRows) {
  MilpProblem lp;
  lp.AddVariable({"x", 0.0, kInfinity, VarType::kContinuous, -1.0});
  lp.AddVariable({"y", 0.0, kInfinity, VarType::kContinuous, 1.0});
  lp.AddRow({"r", RowSense::kLessEqual, {{0, 1.0}, {1, -1.0}}, 2.0});
  absl::StatusOr<LpSolution> s = SolveLp(lp);
  ASSERT_TRUE(s.ok());
  // x - y <= 2 leaves x - y constant along x = y, so min -x + y is bounded.
  EXPECT_EQ(s->status, LpStatus::kOptimal);
  EXPECT_NEAR(s->objective, -2.0, 1e-9);
  lp.variables[1].objective = 0.5;
  s = SolveLp(lp);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->status, LpStatus::kUnbounded);
}

TEST(LpSimplexTest, FreeVariablesAndEqualities) {
  MilpProblem lp;
  lp.AddVariable({"x", -kInfinity, kInfinity, VarType::kContinuous, 1.0});
  lp.AddVariable({"y", -kInfinity, kInfinity, VarType::kContinuous, 2.0});
  lp.AddRow({"e", RowSense::kEqual, {{0, 1.0}, {1, 1.0}}, 3.0});
  lp.AddRow({"g", RowSense::kGreaterEqual, {{0, 1.0}, {1, -1.0}}, -1.0});
  lp.AddRow({"l", RowSense::kLessEqual, {{0, 1.0}}, 10.0});
  absl::StatusOr<LpSolution> s = SolveLp(lp);
  ASSERT_TRUE(s.ok());
  ASSERT_EQ(s->status, LpStatus::kOptimal);
  EXPECT_NEAR(s->primal[0], 10.0, 1e-9);
  EXPECT_NEAR(s->primal[1], -7.0, 1e-9);
  EXPECT_NEAR(s->objective, -4.0, 1e-9);
  ExpectOptimalityConditions(lp, *s);
}

TEST(LpSimplexTest, Phase1FeasibleBox) {
  MilpProblem lp;
  lp.AddVariable({"x", 0.0, 1.0, VarType::kContinuous, 0.0});
  lp.AddVariable({"y", 0.0, 1.0, VarType::kContinuous, 0.0});
  lp.AddRow({"r", RowSense::kGreaterEqual, {{0, 1.0}, {1, 1.0}}, 1.5});
  absl::StatusOr<Phase1Result> r = Phase1Feasibility(lp);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->feasible);
  EXPECT_EQ(r->infeasibility, 0.0);
  EXPECT_LE(MaxViolation(lp, r->primal), 1e-7);
}

TEST(LpSimplexTest, Phase1NegativeUpperRow) {
  MilpProblem lp;
  lp.AddVariable({"x", 0.0, kInfinity, VarType::kContinuous, 0.0});
  lp.AddRow({"r", RowSense::kLessEqual, {{0, 1.0}}, -1.0});
  absl::StatusOr<Phase1Result> r = Phase1Feasibility(lp);
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->feasible);
  EXPECT_NEAR(r->infeasibility, 1.0, 1e-9);
}

TEST(LpSimplexTest, Phase1InconsistentEmptyRow) {
  MilpProblem lp;
  lp.AddVariable({"x", 0.0, 5.0, VarType::kContinuous, 0.0});
  lp.AddRow({"r", RowSense::kEqual, {{0, 0.0}}, 1.0});
  absl::StatusOr<Phase1Result> r = Phase1Feasibility(lp);
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->feasible);
  EXPECT_NEAR(r->infeasibility, 1.0, 1e-9);
}

TEST(LpSimplexTest, BealeTerminatesWithAndWithoutEarlyBland) {
  const MilpProblem lp = BealeLp();
  for (int streak : {0, 50}) {
    LpOptions options;
    options.degenerate_pivots_before_bland = streak;
    absl::StatusOr<LpSolution> s = SolveLp(lp, options);
    ASSERT_TRUE(s.ok());
    ASSERT_EQ(s->status, LpStatus::kOptimal);
    EXPECT_NEAR(s->objective, -1.25, 1e-9);
    ExpectOptimalityConditions(lp, *s);
  }
}

TEST(LpSimplexTest, IterationLimitReported) {
  LpOptions options;
  options.iteration_limit = 1;
  absl::StatusOr<LpSolution> s = SolveLp(TwoVarLp(), options);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->status, LpStatus::kIterationLimit);
}

TEST(LpSimplexTest, WarmStartKeepsObjective) {
  std::mt19937_64 rng(7);
  int warm_cases = 0;
  for (int k = 0; k < 60; ++k) {
    const MilpProblem lp = testing::RandomBoxedLp(rng, 6, 5);
    LpSolver solver(lp);
    absl::StatusOr<LpSolution> cold = solver.Solve();
    ASSERT_TRUE(cold.ok());
    if (cold->status != LpStatus::kOptimal) continue;
    absl::StatusOr<LpSolution> warm = solver.Solve(&cold->basis);
    ASSERT_TRUE(warm.ok());
    ASSERT_EQ(warm->status, LpStatus::kOptimal);
    EXPECT_TRUE(Close(warm->objective, cold->objective));
    EXPECT_EQ(warm->iterations, 0);
    ++warm_cases;
  }
  EXPECT_GT(warm_cases, 10);
}

TEST(LpSimplexTest, WarmStartAfterBoundChange) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 60; ++k) {
    const MilpProblem lp = testing::RandomBoxedLp(rng, 5, 4);
    LpSolver solver(lp);
    absl::StatusOr<LpSolution> first = solver.Solve();
    ASSERT_TRUE(first.ok());
    if (first->status != LpStatus::kOptimal) continue;
    MilpProblem tightened = lp;
    tightened.variables[0].upper = tightened.variables[0].lower;
    std::vector<double> lo, up;
    for (const Variable& v : tightened.variables) {
      lo.push_back(v.lower);
      up.push_back(v.upper);
    }
    absl::StatusOr<LpSolution> warm = solver.Solve(lo, up, &first->basis);
    absl::StatusOr<LpSolution> cold = SolveLp(tightened);
    ASSERT_TRUE(warm.ok() && cold.ok());
    ASSERT_EQ(warm->status, cold->status);
    if (cold->status == LpStatus::kOptimal) {
      EXPECT_TRUE(Close(warm->objective, cold->objective));
    }
  }
}

TEST(LpSimplexTest, RejectsWrongBoundVectors) {
  LpSolver solver(TwoVarLp());
  std::vector<double> lo(1, 0.0), up(1, 1.0);
  EXPECT_FALSE(solver.Solve(lo, up).ok());
}

// Property: objective matches vertex enumeration on random boxed LPs, and
// the infeasible ones are recognized as such.
TEST(LpSimplexTest, MatchesVertexEnumeration) {
  std::mt19937_64 rng(2026);
  int feasible = 0;
  int infeasible = 0;
  for (int k = 0; k < 150; ++k) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const int m = 1 + static_cast<int>(rng() % 10);
    const MilpProblem lp = testing::RandomBoxedLp(rng, n, m);
    const testing::VertexResult oracle = testing::EnumerateVertices(lp);
    for (bool scale : {true, false}) {
      LpOptions options;
      options.scale = scale;
      absl::StatusOr<LpSolution> s = SolveLp(lp, options);
      ASSERT_TRUE(s.ok()) << s.status();
      if (oracle.status == testing::VertexStatus::kInfeasible) {
        EXPECT_EQ(s->status, LpStatus::kInfeasible) << "case " << k;
      } else {
        ASSERT_EQ(s->status, LpStatus::kOptimal) << "case " << k;
        EXPECT_TRUE(Close(s->objective, oracle.objective))
            << "case " << k << ": " << s->objective << " vs "
            << oracle.objective;
        ExpectOptimalityConditions(lp, *s);
      }
    }
    (oracle.status == testing::VertexStatus::kOptimal ? feasible
                                                      : infeasible)++;
  }
  EXPECT_GE(feasible, 100);
  EXPECT_GT(infeasible, 0);
}

// Warm-started dual simplex after tightening bounds, checked against vertex
// enumeration of the tightened problem. A cutoff between the parent and the
// child objective may stop the solve early, but only when the child really
// exceeds it.
TEST(LpSimplexTest, DualWarmStartMatchesEnumeration) {
  std::mt19937_64 rng(4242);
  int compared = 0;
  int cut = 0;
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + static_cast<int>(rng() % 9);
    const int m = 1 + static_cast<int>(rng() % 10);
    const MilpProblem lp = testing::RandomBoxedLp(rng, n, m);
    LpOptions options;
    options.dual = true;
    LpSolver solver(lp, options);
    absl::StatusOr<LpSolution> root = solver.Solve();
    ASSERT_TRUE(root.ok());
    if (root->status != LpStatus::kOptimal) continue;
    MilpProblem child = lp;
    for (int j = 0; j < n; ++j) {
      if (rng() % 3 != 0) continue;
      Variable& v = child.variables[j];
      const double x = root->primal[j];
      if (rng() % 2) {
        v.upper = std::max(v.lower, std::floor(x - 0.25));
      } else {
        v.lower = std::min(v.upper, std::ceil(x + 0.25));
      }
    }
    std::vector<double> lo, up;
    for (const Variable& v : child.variables) {
      lo.push_back(v.lower);
      up.push_back(v.upper);
    }
    const testing::VertexResult oracle = testing::EnumerateVertices(child);
    absl::StatusOr<LpSolution> warm = solver.Solve(lo, up, &root->basis);
    ASSERT_TRUE(warm.ok()) << warm.status();
    if (oracle.status == testing::VertexStatus::kInfeasible) {
      EXPECT_EQ(warm->status, LpStatus::kInfeasible) << "case " << k;
      continue;
    }
    ASSERT_EQ(warm->status, LpStatus::kOptimal) << "case " << k;
    EXPECT_TRUE(Close(warm->objective, oracle.objective))
        << "case " << k << ": " << warm->objective << " vs "
        << oracle.objective;
    ExpectOptimalityConditions(child, *warm);
    ++compared;

    const double cutoff = 0.5 * (root->objective + oracle.objective);
    solver.set_objective_cutoff(cutoff);
    absl::StatusOr<LpSolution> limited = solver.Solve(lo, up, &root->basis);
    solver.set_objective_cutoff(kInfinity);
    ASSERT_TRUE(limited.ok());
    if (limited->status == LpStatus::kCutoff) {
      ++cut;
      EXPECT_GT(oracle.objective, cutoff - 1e-9) << "case " << k;
    } else {
      ASSERT_EQ(limited->status, LpStatus::kOptimal);
      EXPECT_TRUE(Close(limited->objective, oracle.objective));
    }
  }
  EXPECT_GT(compared, 100);
  EXPECT_GT(cut, 0);
}

TEST(LpSimplexTest, CutoffIsIgnoredWithoutTheDual) {
  LpSolver solver(TwoVarLp());
  solver.set_objective_cutoff(-100.0);
  absl::StatusOr<LpSolution> s = solver.Solve();
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->status, LpStatus::kOptimal);
  EXPECT_NEAR(s->objective, -10.0, 1e-9);
}

}  // namespace
}  // namespace evac

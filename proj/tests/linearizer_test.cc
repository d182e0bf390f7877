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


#include "evac/linearizer.h"

#include <cmath>
#include <random>

#include "evac/brute_force.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace evac {
namespace {

bool AllHold(const std::vector<ProductRow>& rows, double x, double y,
             double w) {
  for (const ProductRow& r : rows) {
    if (!r.Holds(x, y, w, 1e-12)) return false;
  }
  return true;
}

TEST(LinearizeProductTest, ExactEnvelopeExamples) {
  absl::StatusOr<std::vector<ProductRow>> rows =
      LinearizeProduct(10.0, LinearizationMode::kExact);
  ASSERT_TRUE(rows.ok());
  EXPECT_EQ(rows->size(), 4u);
  EXPECT_TRUE(AllHold(*rows, 7, 1, 7));
  EXPECT_FALSE(AllHold(*rows, 7, 1, 3));
  for (double x = 0; x <= 10; x += 0.5) {
    EXPECT_TRUE(AllHold(*rows, x, 0, 0));
    EXPECT_FALSE(AllHold(*rows, x, 0, 0.25));
  }
}

// On a grid, the exact rows accept a point iff w = x y.
TEST(LinearizeProductTest, ExactEnvelopeIsTheProduct) {
  for (double upper : {1.0, 10.0, 28.0}) {
    absl::StatusOr<std::vector<ProductRow>> rows =
        LinearizeProduct(upper, LinearizationMode::kExact);
    ASSERT_TRUE(rows.ok());
    for (int y = 0; y <= 1; ++y) {
      for (double x = 0; x <= upper; x += upper / 8) {
        for (double w = 0; w <= upper; w += upper / 16) {
          ASSERT_EQ(AllHold(*rows, x, y, w), w == x * y)
              << upper << " " << x << " " << y << " " << w;
        }
      }
    }
  }
}

TEST(LinearizeProductTest, VerbatimRowsAreARelaxation) {
  absl::StatusOr<std::vector<ProductRow>> rows =
      LinearizeProduct(10.0, LinearizationMode::kPaperVerbatim);
  ASSERT_TRUE(rows.ok());
  EXPECT_TRUE(AllHold(*rows, 7, 1, 3));
  EXPECT_TRUE(AllHold(*rows, 7, 1, 7));
  EXPECT_FALSE(AllHold(*rows, 7, 0, 3));
}

TEST(LinearizeProductTest, RejectsNonpositiveBound) {
  EXPECT_FALSE(LinearizeProduct(0.0, LinearizationMode::kExact).ok());
  EXPECT_FALSE(LinearizeProduct(-1.0, LinearizationMode::kPaperVerbatim).ok());
}

TEST(LinearizerTest, ModeNames) {
  EXPECT_EQ(*ParseLinearizationMode("exact"), LinearizationMode::kExact);
  EXPECT_EQ(*ParseLinearizationMode("paper-verbatim"),
            LinearizationMode::kPaperVerbatim);
  EXPECT_FALSE(ParseLinearizationMode("verbatim").ok());
  EXPECT_EQ(LinearizationModeName(LinearizationMode::kPaperVerbatim),
            "paper-verbatim");
}

absl::StatusOr<MilpProblem> Linearize(const EvacuationInstance& inst,
                                      LinearizationMode mode) {
  absl::StatusOr<MibpModel> m = BuildMibp(inst);
  if (!m.ok()) return m.status();
  return LinearizeModel(*m, inst, mode);
}

TEST(LinearizeModelTest, T1VariableCounts) {
  absl::StatusOr<Network> net = Network::Create(testing::T1Instance());
  ASSERT_TRUE(net.ok());
  absl::StatusOr<MilpProblem> milp =
      Linearize(testing::T1Instance(), LinearizationMode::kExact);
  ASSERT_TRUE(milp.ok()) << milp.status();
  const VariableSpace plain(*net, false);
  EXPECT_EQ(milp->num_variables(), plain.size() + 32);
  int y = 0, v = 0;
  for (const Variable& var : milp->variables) {
    if (var.name[0] == 'y') ++y;
    if (var.name[0] == 'v') ++v;
  }
  EXPECT_EQ(y, 16);
  EXPECT_EQ(v, 16);
  EXPECT_TRUE(ValidateProblem(*milp).ok());
}

TEST(LinearizeModelTest, InfiniteDoseLimitDropsOnlyDoseRows) {
  EvacuationInstance inst = testing::T1Instance();
  absl::StatusOr<MilpProblem> open = Linearize(inst, LinearizationMode::kExact);
  inst.dose_limit = 1.0;
  absl::StatusOr<MilpProblem> limited =
      Linearize(inst, LinearizationMode::kExact);
  ASSERT_TRUE(open.ok() && limited.ok());
  EXPECT_EQ(open->num_variables(), limited->num_variables());
  ASSERT_EQ(limited->num_rows(), open->num_rows() + 1);
  int k = 0;
  for (const Row& row : limited->rows) {
    if (row.name.rfind("EQ1_", 0) == 0) continue;
    EXPECT_EQ(row.name, open->rows[k++].name);
  }
  EXPECT_EQ(k, open->num_rows());
}

TEST(LinearizeModelTest, VerbatimDiffersOnlyInProductRows) {
  absl::StatusOr<MilpProblem> exact =
      Linearize(testing::T1Instance(), LinearizationMode::kExact);
  absl::StatusOr<MilpProblem> verbatim =
      Linearize(testing::T1Instance(), LinearizationMode::kPaperVerbatim);
  ASSERT_TRUE(exact.ok() && verbatim.ok());
  EXPECT_EQ(exact->num_variables(), verbatim->num_variables());
  EXPECT_EQ(exact->metadata.mode, "exact");
  EXPECT_EQ(verbatim->metadata.mode, "paper-verbatim");
}

// Oracle plans lifted into the bit space satisfy every MILP row and keep
// their cost.
TEST(LinearizeModelTest, LiftedOraclePlansAreMilpFeasible) {
  std::mt19937_64 rng(5);
  int lifted = 0;
  for (int k = 0; k < 200; ++k) {
    const EvacuationInstance inst = testing::RandomTinyInstance(rng);
    absl::StatusOr<OracleResult> oracle = BruteForceOracle(inst);
    ASSERT_TRUE(oracle.ok());
    if (!oracle->feasible) continue;
    ++lifted;
    absl::StatusOr<Network> net = Network::Create(inst);
    absl::StatusOr<EvacuationPlan> plan = ExpandPlanBits(*net, oracle->plan);
    ASSERT_TRUE(plan.ok()) << plan.status();
    EXPECT_EQ(*ProductResidual(*net, *plan), 0.0);
    for (LinearizationMode mode :
         {LinearizationMode::kExact, LinearizationMode::kPaperVerbatim}) {
      absl::StatusOr<MilpProblem> milp = Linearize(inst, mode);
      ASSERT_TRUE(milp.ok());
      EXPECT_LE(MaxViolation(*milp, plan->values), 1e-9) << "case " << k;
      EXPECT_NEAR(ObjectiveValue(*milp, plan->values), oracle->objective,
                  1e-9);
    }
  }
  EXPECT_GT(lifted, 40);
}

TEST(LinearizeModelTest, ExpandPlanBitsRejectsBadLoads) {
  absl::StatusOr<Network> net = Network::Create(testing::T1Instance());
  ASSERT_TRUE(net.ok());
  const VariableSpace vs(*net, false);
  EvacuationPlan plan{"T1", "test", std::vector<double>(vs.size(), 0.0)};
  plan.values[vs.B(1, 0, 0)] = 3.0;
  EXPECT_FALSE(ExpandPlanBits(*net, plan).ok());
  plan.values[vs.B(1, 0, 0)] = 0.5;
  EXPECT_FALSE(ExpandPlanBits(*net, plan).ok());
}

// A point with v != 2^n T y that the verbatim rows accept and the exact rows
// reject, embedded in T1.
TEST(LinearizeModelTest, VerbatimRelaxationWitness) {
  const EvacuationInstance inst = testing::T1Instance();
  absl::StatusOr<OracleResult> oracle = BruteForceOracle(inst);
  ASSERT_TRUE(oracle.ok() && oracle->feasible);
  absl::StatusOr<Network> net = Network::Create(inst);
  absl::StatusOr<EvacuationPlan> plan = ExpandPlanBits(*net, oracle->plan);
  ASSERT_TRUE(plan.ok());
  const VariableSpace vs(*net, true);
  // Find a product with y = 1 and T > 0 and move v off it.
  int target = -1;
  for (int t = 0; t < net->num_trips() && target < 0; ++t) {
    for (int n = 0; n < vs.bit_width(); ++n) {
      if (plan->values[vs.Y(1, 0, t, n)] == 1.0 &&
          plan->values[vs.T(1, 0, t)] > 0.0) {
        target = vs.V(1, 0, t, n);
        break;
      }
    }
  }
  ASSERT_GE(target, 0);
  const double product = plan->values[target];
  plan->values[target] = product / 4;
  EXPECT_GT(*ProductResidual(*net, *plan), 1.0);

  absl::StatusOr<MilpProblem> verbatim =
      Linearize(inst, LinearizationMode::kPaperVerbatim);
  absl::StatusOr<MilpProblem> exact = Linearize(inst, LinearizationMode::kExact);
  ASSERT_TRUE(verbatim.ok() && exact.ok());
  EXPECT_LE(MaxViolation(*verbatim, plan->values), 1e-9);
  EXPECT_GT(MaxViolation(*exact, plan->values), 1.0);
  EXPECT_EQ(MaxIntegrality(*verbatim, plan->values), 0.0);
}

}  // namespace
}  // namespace evac

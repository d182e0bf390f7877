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

#include "evac/brute_force.h"

#include "gtest/gtest.h"
#include "test_support.h"

namespace evac {
namespace {

TEST(BruteForceTest, T1Optimum) {
  absl::StatusOr<OracleResult> r = BruteForceOracle(testing::T1Instance());
  ASSERT_TRUE(r.ok()) << r.status();
  ASSERT_TRUE(r->feasible);
  EXPECT_EQ(r->objective, 26.0);
  absl::StatusOr<Network> net = Network::Create(testing::T1Instance());
  ASSERT_TRUE(net.ok());
  const VariableSpace vs(*net, false);
  // d->p, p->s, s->p, p->s with loads 2, 2, 1, 1.
  const int d = 0, p = 1, s = 2;
  EXPECT_EQ(r->plan.values[vs.X(net->FindArc(d, p), 0, 0)], 1.0);
  EXPECT_EQ(r->plan.values[vs.X(net->FindArc(p, s), 0, 1)], 1.0);
  EXPECT_EQ(r->plan.values[vs.X(net->FindArc(s, p), 0, 2)], 1.0);
  EXPECT_EQ(r->plan.values[vs.X(net->FindArc(p, s), 0, 3)], 1.0);
  EXPECT_EQ(r->plan.values[vs.B(p, 0, 0)] + r->plan.values[vs.B(p, 0, 2)],
            3.0);
  absl::StatusOr<FeasibilityReport> report =
      CheckPlan(testing::T1Instance(), r->plan);
  ASSERT_TRUE(report.ok());
  EXPECT_TRUE(report->feasible());
}

TEST(BruteForceTest, ZeroDemandStillMovesEveryBus) {
  EvacuationInstance inst = testing::T1Instance();
  inst.demand["p"] = 0;
  absl::StatusOr<OracleResult> r = BruteForceOracle(inst);
  ASSERT_TRUE(r.ok());
  ASSERT_TRUE(r->feasible);
  EXPECT_EQ(r->objective, 12.0);
}

TEST(BruteForceTest, VolumePrecheck) {
  EvacuationInstance inst = testing::T1Instance();
  inst.demand["p"] = 4;
  inst.trips = 1;
  absl::StatusOr<OracleResult> r = BruteForceOracle(inst);
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->feasible);
}

TEST(BruteForceTest, RefusesLargeInstances) {
  EvacuationInstance inst = testing::T1Instance();
  inst.capacity = 5;
  EXPECT_EQ(BruteForceOracle(inst).status().code(),
            absl::StatusCode::kResourceExhausted);
  inst = testing::T1Instance();
  inst.demand["p"] = 5;
  EXPECT_EQ(BruteForceOracle(inst).status().code(),
            absl::StatusCode::kResourceExhausted);
  inst = testing::T1Instance();
  inst.trips = 12;  // 4^12 > 1e7
  EXPECT_EQ(BruteForceOracle(inst).status().code(),
            absl::StatusCode::kResourceExhausted);
}

TEST(BruteForceTest, DoseLimitCountsEveryEvacuee) {
  // Each evacuee gets 0.01 * 7 = 0.07 of escape dose and nothing while
  // waiting, so the three people need 0.21 between them.
  EvacuationInstance inst = testing::T1Instance();
  inst.arcs[1].radiation = 0.01;  // p -> s
  inst.node_radiation["p"] = 0.0;
  inst.dose_limit = 0.14;  // 0.07 per person escape dose
  absl::StatusOr<OracleResult> r = BruteForceOracle(inst);
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->feasible);  // three people need 0.21
  inst.dose_limit = 0.21;
  r = BruteForceOracle(inst);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->feasible);
  EXPECT_EQ(r->objective, 26.0);
}

TEST(BruteForceTest, EveryPlanPassesChecker) {
  std::mt19937_64 rng(1);
  int feasible = 0;
  for (int k = 0; k < 200; ++k) {
    const EvacuationInstance inst = testing::RandomTinyInstance(rng);
    absl::StatusOr<OracleResult> r = BruteForceOracle(inst);
    ASSERT_TRUE(r.ok()) << r.status();
    if (!r->feasible) continue;
    ++feasible;
    absl::StatusOr<FeasibilityReport> report = CheckPlan(inst, r->plan);
    ASSERT_TRUE(report.ok());
    EXPECT_TRUE(report->feasible()) << "case " << k;
    absl::StatusOr<Network> net = Network::Create(inst);
    absl::StatusOr<double> cost = PlanCost(*net, r->plan);
    ASSERT_TRUE(cost.ok());
    EXPECT_EQ(*cost, r->objective);
  }
  EXPECT_GT(feasible, 40);
}

// The return visit to p on trip 3 may use T_p = 5: the bus is at s when
// trip 3 starts, so only the latest time of trip 2 bounds T_p.
TEST(BruteForceTest, UnvisitedNodesKeepTheirEarlierTime) {
  EvacuationInstance inst = testing::T1Instance();
  inst.arcs[1].radiation = 0.01;
  inst.node_radiation["p"] = 0.002;
  inst.dose_limit = 0.22;  // 0.21 + 0.002 * 5 * 1
  absl::StatusOr<OracleResult> r = BruteForceOracle(inst);
  ASSERT_TRUE(r.ok());
  ASSERT_TRUE(r->feasible);
  absl::StatusOr<Network> net = Network::Create(inst);
  const VariableSpace vs(*net, false);
  const int p = 1, s = 2;
  EXPECT_EQ(r->plan.values[vs.T(p, 0, 2)], 5.0);
  EXPECT_EQ(r->plan.values[vs.T(s, 0, 2)], 12.0);
  EXPECT_EQ(r->plan.values[vs.T(p, 0, 3)], 19.0);
  EXPECT_EQ(r->plan.values[vs.B(p, 0, 2)], 1.0);
  absl::StatusOr<FeasibilityReport> report = CheckPlan(inst, r->plan);
  ASSERT_TRUE(report.ok());
  EXPECT_TRUE(report->feasible());

  inst.dose_limit = 0.2199;
  r = BruteForceOracle(inst);
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->feasible);
}

// With four trips one bus can serve p twice, which costs more than a second
// bus doing one run from the depot when d -> p is cheap and s -> p is not.
TEST(BruteForceTest, AddingABusCanLowerCostOnLongerHorizons) {
  EvacuationInstance inst = testing::T1Instance();
  inst.arcs[0].travel_time = 1;   // d -> p
  inst.arcs[1].travel_time = 10;  // p -> s
  inst.arcs[2].travel_time = 50;  // s -> p
  inst.demand["p"] = 4;
  absl::StatusOr<OracleResult> one = BruteForceOracle(inst);
  ASSERT_TRUE(one.ok() && one->feasible);
  EXPECT_EQ(one->objective, 71.0);
  inst.buses.push_back({"m2", "d"});
  absl::StatusOr<OracleResult> two = BruteForceOracle(inst);
  ASSERT_TRUE(two.ok() && two->feasible);
  EXPECT_EQ(two->objective, 22.0);
}

}  // namespace
}  // namespace evac

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


#include "evac/model_cuts.h"

#include <string>
#include <utility>

#include "absl/strings/str_cat.h"

namespace evac {

absl::StatusOr<int> AddVisitCuts(const Network& network,
                                 MilpProblem& problem) {
  const VariableSpace space(network, /*with_bits=*/false);
  if (problem.num_variables() < space.count(VarKind::kX)) {
    return absl::InvalidArgumentError(
        "problem is smaller than the routing variable block");
  }
  const int64_t q = network.capacity();
  if (q <= 0) return absl::InvalidArgumentError("capacity must be positive");
  int added = 0;
  for (int p = network.first_pickup(); p < network.first_shelter(); ++p) {
    const int64_t demand = network.demand(p);
    if (demand <= 0) continue;
    Row row{"VISIT_" + network.node_id(p), RowSense::kGreaterEqual, {},
            static_cast<double>((demand + q - 1) / q)};
    for (int a : network.in_arcs(p)) {
      for (int m = 0; m < network.num_buses(); ++m) {
        for (int t = 0; t < network.num_trips(); ++t) {
          row.terms.push_back({space.X(a, m, t), 1.0});
        }
      }
    }
    problem.AddRow(std::move(row));
    ++added;
  }
  return added;
}

absl::StatusOr<std::vector<AggregateColumn>> AddArcAggregates(
    const Network& network, MilpProblem& problem) {
  const VariableSpace space(network, /*with_bits=*/false);
  if (problem.num_variables() < space.count(VarKind::kX)) {
    return absl::InvalidArgumentError(
        "problem is smaller than the routing variable block");
  }
  std::vector<AggregateColumn> aggregates;
  for (int depot = 0; depot < network.num_depots(); ++depot) {
    std::vector<int> buses;
    for (int m = 0; m < network.num_buses(); ++m) {
      if (network.bus_depot(m) == depot) buses.push_back(m);
    }
    if (buses.size() < 2) continue;
    for (int a = 0; a < network.num_arcs(); ++a) {
      const int from = network.arc_from(a);
      const int to = network.arc_to(a);
      if (network.is_depot(from) && from != depot) continue;
      for (int t = 0; t < network.num_trips(); ++t) {
        // Depot arcs are used on the first trip only.
        if (network.is_depot(from) != (t == 0)) continue;
        const std::string name =
            absl::StrCat("z_", network.node_id(from), "_", network.node_id(to),
                         "_", network.node_id(depot), "_t", t + 1);
        AggregateColumn column;
        column.var = problem.AddVariable(
            {name, 0.0, static_cast<double>(buses.size()), VarType::kInteger,
             0.0});
        Row row{"AGG_" + name, RowSense::kEqual, {{column.var, 1.0}}, 0.0};
        for (int m : buses) {
          column.members.push_back(space.X(a, m, t));
          row.terms.push_back({space.X(a, m, t), -1.0});
        }
        problem.AddRow(std::move(row));
        aggregates.push_back(std::move(column));
      }
    }
  }
  return aggregates;
}

std::vector<double> ExtendWithAggregates(
    std::span<const double> values,
    const std::vector<AggregateColumn>& aggregates) {
  std::vector<double> extended(values.begin(), values.end());
  for (const AggregateColumn& column : aggregates) {
    double sum = 0.0;
    for (int j : column.members) sum += values[j];
    if (column.var >= static_cast<int>(extended.size())) {
      extended.resize(column.var + 1, 0.0);
    }
    extended[column.var] = sum;
  }
  return extended;
}

}  // namespace evac

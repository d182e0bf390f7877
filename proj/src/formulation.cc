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

#include "evac/formulation.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"

namespace evac {
namespace {

std::string Sub(int bus, int trip) {
  return absl::StrCat("_m", bus + 1, "_t", trip + 1);
}

const VariableSpace& CheckDimensions(const VariableSpace& bitless,
                                     const VariableSpace& with_bits,
                                     const EvacuationPlan& plan, bool* ok) {
  *ok = true;
  if (static_cast<int>(plan.values.size()) == bitless.size()) return bitless;
  if (static_cast<int>(plan.values.size()) == with_bits.size()) {
    return with_bits;
  }
  *ok = false;
  return bitless;
}

absl::Status DimensionError(const Network& net, const EvacuationPlan& plan) {
  return absl::InvalidArgumentError(absl::StrCat(
      "plan has ", plan.values.size(),
      " values, which matches no variable space of instance '", net.name(),
      "'"));
}

bool Satisfied(double lhs, RowSense sense, double rhs, double tolerance) {
  switch (sense) {
    case RowSense::kLessEqual:
      return lhs <= rhs + tolerance;
    case RowSense::kGreaterEqual:
      return lhs >= rhs - tolerance;
    case RowSense::kEqual:
      return std::abs(lhs - rhs) <= tolerance;
  }
  return false;
}

}  // namespace

std::string EquationName(Equation equation) {
  return absl::StrCat("EQ", static_cast<int>(equation));
}

int MibpModel::FamilySize(Equation equation) const {
  return static_cast<int>(std::count_if(
      constraints.begin(), constraints.end(),
      [equation](const ConstraintRecord& c) { return c.equation == equation; }));
}

absl::StatusOr<MibpModel> BuildMibp(const EvacuationInstance& instance) {
  absl::StatusOr<Network> created = Network::Create(instance);
  if (!created.ok()) return created.status();
  const Network& net = *created;

  const int64_t volume =
      int64_t{net.num_buses()} * net.num_trips() * net.capacity();
  if (net.total_demand() > volume) {
    return absl::FailedPreconditionError(absl::StrCat(
        "insufficient transport volume: total demand ", net.total_demand(),
        " exceeds buses x trips x capacity = ", volume));
  }

  MibpModel model{net, VariableSpace(net, /*with_bits=*/false), {}, {}};
  const VariableSpace& vs = model.space;
  const int num_buses = net.num_buses();
  const int num_trips = net.num_trips();
  const double q = static_cast<double>(net.capacity());
  auto add = [&model](ConstraintRecord record) {
    model.constraints.push_back(std::move(record));
  };

  for (int a = 0; a < net.num_arcs(); ++a) {
    for (int m = 0; m < num_buses; ++m) {
      for (int t = 0; t < num_trips; ++t) {
        model.objective.push_back({vs.X(a, m, t), net.travel_time(a)});
      }
    }
  }

  // EQ1: sum_t sum_{j in S} tau_ij travel_ij b_i + sum_t eta_i T_i b_i.
  for (int i = net.first_pickup(); i < net.first_shelter(); ++i) {
    double escape = 0.0;
    for (int j = net.first_shelter(); j < net.num_nodes(); ++j) {
      const int arc = net.FindArc(i, j);
      escape += net.arc_radiation(arc) * net.travel_time(arc);
    }
    for (int m = 0; m < num_buses; ++m) {
      ConstraintRecord r{Equation::kEq1,
                         absl::StrCat("EQ1_", net.node_id(i), "_m", m + 1)};
      for (int t = 0; t < num_trips; ++t) {
        r.linear.push_back({vs.B(i, m, t), escape});
        r.bilinear.push_back(
            {vs.T(i, m, t), vs.B(i, m, t), net.node_radiation(i)});
      }
      r.sense = RowSense::kLessEqual;
      r.rhs = net.dose_limit();
      add(std::move(r));
    }
  }

  // EQ2 over every ordered node pair, including i == j and non-arcs.
  for (int i = 0; i < net.num_nodes(); ++i) {
    for (int j = 0; j < net.num_nodes(); ++j) {
      const int arc = net.FindArc(i, j);
      for (int m = 0; m < num_buses; ++m) {
        for (int t = 0; t + 1 < num_trips; ++t) {
          ConstraintRecord r{Equation::kEq2,
                             absl::StrCat("EQ2_", net.node_id(i), "_",
                                          net.node_id(j), Sub(m, t))};
          r.linear.push_back({vs.T(j, m, t + 1), 1.0});
          r.linear.push_back({vs.T(i, m, t), -1.0});
          if (arc >= 0) {
            r.linear.push_back({vs.X(arc, m, t), -net.travel_time(arc)});
          }
          r.sense = RowSense::kGreaterEqual;
          r.rhs = 0.0;
          add(std::move(r));
        }
      }
    }
  }

  // EQ3 (pickups, equality) and EQ4 (shelters, inequality).
  for (int j = net.first_pickup(); j < net.num_nodes(); ++j) {
    const bool pickup = net.is_pickup(j);
    for (int m = 0; m < num_buses; ++m) {
      for (int t = 0; t + 1 < num_trips; ++t) {
        ConstraintRecord r{pickup ? Equation::kEq3 : Equation::kEq4,
                           absl::StrCat(pickup ? "EQ3_" : "EQ4_",
                                        net.node_id(j), Sub(m, t))};
        for (int arc : net.in_arcs(j)) r.linear.push_back({vs.X(arc, m, t), 1.0});
        for (int arc : net.out_arcs(j)) {
          r.linear.push_back({vs.X(arc, m, t + 1), -1.0});
        }
        r.sense = pickup ? RowSense::kEqual : RowSense::kGreaterEqual;
        r.rhs = 0.0;
        add(std::move(r));
      }
    }
  }

  // EQ5.
  for (int m = 0; m < num_buses; ++m) {
    for (int t = 0; t < num_trips; ++t) {
      ConstraintRecord r{Equation::kEq5, absl::StrCat("EQ5", Sub(m, t))};
      for (int a = 0; a < net.num_arcs(); ++a) {
        r.linear.push_back({vs.X(a, m, t), 1.0});
      }
      r.sense = RowSense::kLessEqual;
      r.rhs = 1.0;
      add(std::move(r));
    }
  }

  // EQ6 for buses homed at each depot; EQ7 for every bus at later trips.
  for (int m = 0; m < num_buses; ++m) {
    const int depot = net.bus_depot(m);
    ConstraintRecord r{Equation::kEq6,
                       absl::StrCat("EQ6_", net.node_id(depot), "_m", m + 1)};
    for (int arc : net.out_arcs(depot)) r.linear.push_back({vs.X(arc, m, 0), 1.0});
    r.sense = RowSense::kEqual;
    r.rhs = 1.0;
    add(std::move(r));
  }
  for (int i = 0; i < net.num_depots(); ++i) {
    for (int arc : net.out_arcs(i)) {
      for (int m = 0; m < num_buses; ++m) {
        for (int t = 1; t < num_trips; ++t) {
          ConstraintRecord r{
              Equation::kEq7,
              absl::StrCat("EQ7_", net.node_id(i), "_",
                           net.node_id(net.arc_to(arc)), Sub(m, t))};
          r.linear.push_back({vs.X(arc, m, t), 1.0});
          r.sense = RowSense::kEqual;
          r.rhs = 0.0;
          add(std::move(r));
        }
      }
    }
  }

  // EQ8.
  for (int i = net.first_shelter(); i < net.num_nodes(); ++i) {
    for (int arc : net.out_arcs(i)) {
      for (int m = 0; m < num_buses; ++m) {
        const int t = num_trips - 1;
        ConstraintRecord r{
            Equation::kEq8,
            absl::StrCat("EQ8_", net.node_id(i), "_",
                         net.node_id(net.arc_to(arc)), Sub(m, t))};
        r.linear.push_back({vs.X(arc, m, t), 1.0});
        r.sense = RowSense::kEqual;
        r.rhs = 0.0;
        add(std::move(r));
      }
    }
  }

  // EQ9: b_j <= Q * (arrivals at j).
  for (int j = net.first_pickup(); j < net.num_nodes(); ++j) {
    for (int m = 0; m < num_buses; ++m) {
      for (int t = 0; t < num_trips; ++t) {
        ConstraintRecord r{Equation::kEq9,
                           absl::StrCat("EQ9_", net.node_id(j), Sub(m, t))};
        r.linear.push_back({vs.B(j, m, t), 1.0});
        for (int arc : net.in_arcs(j)) r.linear.push_back({vs.X(arc, m, t), -q});
        r.sense = RowSense::kLessEqual;
        r.rhs = 0.0;
        add(std::move(r));
      }
    }
  }

  // EQ10 as two one-sided records.
  for (int m = 0; m < num_buses; ++m) {
    for (int t = 0; t < num_trips; ++t) {
      std::vector<Term> load;
      for (int l = 0; l <= t; ++l) {
        for (int j = net.first_pickup(); j < net.num_nodes(); ++j) {
          load.push_back({vs.B(j, m, l), net.is_pickup(j) ? 1.0 : -1.0});
        }
      }
      ConstraintRecord lower{Equation::kEq10,
                             absl::StrCat("EQ10lo", Sub(m, t)), load};
      lower.sense = RowSense::kGreaterEqual;
      lower.rhs = 0.0;
      ConstraintRecord upper{Equation::kEq10,
                             absl::StrCat("EQ10up", Sub(m, t)),
                             std::move(load)};
      upper.sense = RowSense::kLessEqual;
      upper.rhs = q;
      add(std::move(lower));
      add(std::move(upper));
    }
  }

  // EQ11.
  for (int j = net.first_pickup(); j < net.first_shelter(); ++j) {
    ConstraintRecord r{Equation::kEq11, absl::StrCat("EQ11_", net.node_id(j))};
    for (int m = 0; m < num_buses; ++m) {
      for (int t = 0; t < num_trips; ++t) {
        r.linear.push_back({vs.B(j, m, t), 1.0});
      }
    }
    r.sense = RowSense::kEqual;
    r.rhs = static_cast<double>(net.demand(j));
    add(std::move(r));
  }

  // EQ12.
  for (int m = 0; m < num_buses; ++m) {
    ConstraintRecord r{Equation::kEq12, absl::StrCat("EQ12_m", m + 1)};
    for (int j = net.first_pickup(); j < net.num_nodes(); ++j) {
      for (int t = 0; t < num_trips; ++t) {
        r.linear.push_back({vs.B(j, m, t), net.is_pickup(j) ? 1.0 : -1.0});
      }
    }
    r.sense = RowSense::kEqual;
    r.rhs = 0.0;
    add(std::move(r));
  }

  // Domains.
  auto add_domain = [&](Equation eq, int var, Domain domain) {
    ConstraintRecord r{eq, absl::StrCat(EquationName(eq), "_", vs.Name(var))};
    r.linear.push_back({var, 1.0});
    r.sense = RowSense::kGreaterEqual;
    r.rhs = 0.0;
    r.domain = domain;
    add(std::move(r));
  };
  for (int p = vs.offset(VarKind::kX); p < vs.offset(VarKind::kT); ++p) {
    add_domain(Equation::kEq13, p, Domain::kBinary);
  }
  for (int p = vs.offset(VarKind::kB); p < vs.size(); ++p) {
    add_domain(Equation::kEq14, p, Domain::kNonnegativeInteger);
  }
  for (int p = vs.offset(VarKind::kT); p < vs.offset(VarKind::kB); ++p) {
    add_domain(Equation::kEq15, p, Domain::kNonnegative);
  }

  std::stable_sort(model.constraints.begin(), model.constraints.end(),
                   [](const ConstraintRecord& a, const ConstraintRecord& b) {
                     return a.equation < b.equation;
                   });
  return model;
}

absl::StatusOr<FeasibilityReport> CheckPlan(const MibpModel& model,
                                            const EvacuationPlan& plan,
                                            const CheckOptions& options) {
  const VariableSpace& vs = model.space;
  if (static_cast<int>(plan.values.size()) != vs.size()) {
    const VariableSpace with_bits(model.network, /*with_bits=*/true);
    if (static_cast<int>(plan.values.size()) != with_bits.size()) {
      return DimensionError(model.network, plan);
    }
  }
  const std::vector<double>& v = plan.values;
  FeasibilityReport report;
  for (const ConstraintRecord& c : model.constraints) {
    if (c.domain != Domain::kNone) {
      const double value = v[c.linear.front().var];
      bool ok = true;
      switch (c.domain) {
        case Domain::kBinary:
          ok = value == 0.0 || value == 1.0;
          break;
        case Domain::kNonnegativeInteger:
          ok = value >= 0.0 && value == std::floor(value);
          break;
        case Domain::kNonnegative:
          ok = value >= -options.tolerance;
          break;
        case Domain::kNone:
          break;
      }
      if (!ok) {
        report.violations.push_back(
            {c.equation, c.name, value, c.sense, c.rhs});
      }
      continue;
    }
    double lhs = 0.0;
    for (const Term& term : c.linear) lhs += term.coef * v[term.var];
    for (const BilinearTerm& term : c.bilinear) {
      lhs += term.coef * v[term.left] * v[term.right];
    }
    if (!Satisfied(lhs, c.sense, c.rhs, options.tolerance)) {
      report.violations.push_back({c.equation, c.name, lhs, c.sense, c.rhs});
    }
  }
  return report;
}

absl::StatusOr<FeasibilityReport> CheckPlan(const EvacuationInstance& instance,
                                            const EvacuationPlan& plan,
                                            const CheckOptions& options) {
  absl::StatusOr<MibpModel> model = BuildMibp(instance);
  if (!model.ok()) return model.status();
  return CheckPlan(*model, plan, options);
}

absl::StatusOr<std::vector<DoseEntry>> ComputeDoses(
    const Network& net, const EvacuationPlan& plan) {
  const VariableSpace bitless(net, false);
  const VariableSpace with_bits(net, true);
  bool ok;
  const VariableSpace& vs = CheckDimensions(bitless, with_bits, plan, &ok);
  if (!ok) return DimensionError(net, plan);
  std::vector<DoseEntry> doses;
  for (int i = net.first_pickup(); i < net.first_shelter(); ++i) {
    double escape = 0.0;
    for (int j = net.first_shelter(); j < net.num_nodes(); ++j) {
      const int arc = net.FindArc(i, j);
      escape += net.arc_radiation(arc) * net.travel_time(arc);
    }
    for (int m = 0; m < net.num_buses(); ++m) {
      double dose = 0.0;
      for (int t = 0; t < net.num_trips(); ++t) {
        const double b = plan.values[vs.B(i, m, t)];
        dose += escape * b +
                net.node_radiation(i) * plan.values[vs.T(i, m, t)] * b;
      }
      doses.push_back({net.node_id(i), net.bus_id(m), dose});
    }
  }
  return doses;
}

absl::StatusOr<std::vector<BusRoute>> ExtractRoutes(
    const Network& net, const EvacuationPlan& plan) {
  const VariableSpace bitless(net, false);
  const VariableSpace with_bits(net, true);
  bool ok;
  const VariableSpace& vs = CheckDimensions(bitless, with_bits, plan, &ok);
  if (!ok) return DimensionError(net, plan);
  std::vector<BusRoute> routes;
  for (int m = 0; m < net.num_buses(); ++m) {
    BusRoute route{net.bus_id(m), {}};
    double clock = 0.0;
    double load = 0.0;
    for (int t = 0; t < net.num_trips(); ++t) {
      RouteLeg leg;
      leg.trip = t + 1;
      leg.depart = clock;
      leg.load_before = load;
      int chosen = -1;
      for (int a = 0; a < net.num_arcs(); ++a) {
        if (plan.values[vs.X(a, m, t)] <= 0.5) continue;
        if (chosen >= 0) {
          return absl::InvalidArgumentError(absl::StrCat(
              "malformed plan: bus ", net.bus_id(m), " uses arcs ",
              net.node_id(net.arc_from(chosen)), "->",
              net.node_id(net.arc_to(chosen)), " and ",
              net.node_id(net.arc_from(a)), "->", net.node_id(net.arc_to(a)),
              " on trip ", t + 1));
        }
        chosen = a;
      }
      if (chosen >= 0) {
        leg.idle = false;
        leg.from = net.node_id(net.arc_from(chosen));
        leg.to = net.node_id(net.arc_to(chosen));
        clock += net.travel_time(chosen);
      }
      for (int j = net.first_pickup(); j < net.num_nodes(); ++j) {
        const double b = plan.values[vs.B(j, m, t)];
        load += net.is_pickup(j) ? b : -b;
      }
      leg.arrive = clock;
      leg.load_after = load;
      route.legs.push_back(std::move(leg));
    }
    routes.push_back(std::move(route));
  }
  return routes;
}

absl::StatusOr<double> PlanCost(const Network& net,
                                const EvacuationPlan& plan) {
  const VariableSpace bitless(net, false);
  const VariableSpace with_bits(net, true);
  bool ok;
  const VariableSpace& vs = CheckDimensions(bitless, with_bits, plan, &ok);
  if (!ok) return DimensionError(net, plan);
  double cost = 0.0;
  for (int a = 0; a < net.num_arcs(); ++a) {
    for (int m = 0; m < net.num_buses(); ++m) {
      for (int t = 0; t < net.num_trips(); ++t) {
        cost += net.travel_time(a) * plan.values[vs.X(a, m, t)];
      }
    }
  }
  return cost;
}

double EvacuationTime(const std::vector<BusRoute>& routes) {
  double latest = 0.0;
  for (const BusRoute& route : routes) {
    for (const RouteLeg& leg : route.legs) {
      if (!leg.idle) latest = std::max(latest, leg.arrive);
    }
  }
  return latest;
}

}  // namespace evac

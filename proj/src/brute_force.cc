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

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace evac {
namespace {

// Same slack the plan checker allows on the dose rows.
constexpr double kDoseSlack = 1e-6;

struct BusOption {
  double cost = 0.0;
  std::vector<int> arcs;         // one per trip actually travelled
  std::vector<int64_t> loads;    // b at the arrival node of each arc
  std::vector<int64_t> picked;   // per pickup (index from first_pickup)
};

// All arc sequences allowed for a bus starting at `depot`.
std::vector<std::vector<int>> Routes(const Network& net, int depot) {
  std::vector<std::vector<int>> out;
  const int horizon = net.num_trips();
  std::vector<int> route;
  auto extend = [&](auto&& self) -> void {
    const int t = static_cast<int>(route.size());  // trips used so far
    const int at = net.arc_to(route.back());
    if (net.is_pickup(at)) {
      // A bus at a pickup must leave on the next trip.
      if (t == horizon) {
        if (t == 1) out.push_back(route);
        return;
      }
      for (int arc : net.out_arcs(at)) {
        route.push_back(arc);
        self(self);
        route.pop_back();
      }
      return;
    }
    out.push_back(route);
    // Shelter -> pickup is barred on the last trip.
    if (t + 1 >= horizon) return;
    for (int arc : net.out_arcs(at)) {
      route.push_back(arc);
      self(self);
      route.pop_back();
    }
  };
  for (int arc : net.out_arcs(depot)) {
    route.assign(1, arc);
    extend(extend);
  }
  return out;
}

// Smallest times allowed by EQ2 and EQ15 along `route`: times[t][j] for
// every trip t and node j. A node the bus does not reach on trip t still
// inherits the latest time of trip t - 1.
std::vector<std::vector<double>> MinimalTimes(const Network& net,
                                              const std::vector<int>& route) {
  std::vector<std::vector<double>> times(
      net.num_trips(), std::vector<double>(net.num_nodes(), 0.0));
  for (int t = 0; t + 1 < net.num_trips(); ++t) {
    const double latest =
        *std::max_element(times[t].begin(), times[t].end());
    std::fill(times[t + 1].begin(), times[t + 1].end(), latest);
    if (t < static_cast<int>(route.size())) {
      const int arc = route[t];
      double& to = times[t + 1][net.arc_to(arc)];
      to = std::max(to, times[t][net.arc_from(arc)] + net.travel_time(arc));
    }
  }
  return times;
}

// Enumerates loads along `route`, appending feasible options.
void Loads(const Network& net, const std::vector<int>& route,
           std::vector<BusOption>& out) {
  const int len = static_cast<int>(route.size());
  const int64_t q = net.capacity();
  const std::vector<std::vector<double>> times = MinimalTimes(net, route);
  double cost = 0.0;
  for (int arc : route) cost += net.travel_time(arc);
  std::vector<double> escape(net.num_nodes(), 0.0);
  for (int i = net.first_pickup(); i < net.first_shelter(); ++i) {
    for (int s = net.first_shelter(); s < net.num_nodes(); ++s) {
      const int arc = net.FindArc(i, s);
      escape[i] += net.arc_radiation(arc) * net.travel_time(arc);
    }
  }
  std::vector<int64_t> loads(len, 0);
  auto rec = [&](auto&& self, int t, int64_t onboard) -> void {
    if (t == len) {
      if (onboard != 0) return;
      BusOption opt;
      opt.cost = cost;
      opt.arcs = route;
      opt.loads = loads;
      opt.picked.assign(net.num_pickups(), 0);
      std::vector<double> dose(net.num_nodes(), 0.0);
      for (int k = 0; k < len; ++k) {
        const int node = net.arc_to(route[k]);
        if (!net.is_pickup(node)) continue;
        opt.picked[node - net.first_pickup()] += loads[k];
        dose[node] += static_cast<double>(loads[k]) *
                      (escape[node] + net.node_radiation(node) * times[k][node]);
      }
      for (int i = net.first_pickup(); i < net.first_shelter(); ++i) {
        if (dose[i] > net.dose_limit() + kDoseSlack) return;
      }
      out.push_back(std::move(opt));
      return;
    }
    const bool pickup = net.is_pickup(net.arc_to(route[t]));
    for (int64_t b = 0; b <= q; ++b) {
      const int64_t next = pickup ? onboard + b : onboard - b;
      if (next < 0 || next > q) continue;
      loads[t] = b;
      self(self, t + 1, next);
    }
    loads[t] = 0;
  };
  rec(rec, 0, 0);
}

}  // namespace

absl::StatusOr<OracleResult> BruteForceOracle(
    const EvacuationInstance& instance, const OracleLimits& limits) {
  absl::StatusOr<Network> created = Network::Create(instance);
  if (!created.ok()) return created.status();
  const Network& net = *created;

  const double space =
      std::pow(static_cast<double>(net.num_arcs() + 1),
               static_cast<double>(net.num_buses()) * net.num_trips());
  if (space > limits.max_search_space) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "search space too large: (|A|+1)^(|V|T) = ", space, " exceeds ",
        limits.max_search_space));
  }
  if (net.capacity() > limits.max_capacity) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "search space too large: capacity ", net.capacity(), " exceeds ",
        limits.max_capacity));
  }
  for (int i = net.first_pickup(); i < net.first_shelter(); ++i) {
    if (net.demand(i) > limits.max_demand) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "search space too large: demand at ", net.node_id(i), " exceeds ",
          limits.max_demand));
    }
  }

  OracleResult result;
  if (net.total_demand() > static_cast<int64_t>(net.num_buses()) *
                               net.num_trips() * net.capacity()) {
    return result;
  }

  // Cheapest option per collected vector, per bus.
  std::vector<std::map<std::vector<int64_t>, BusOption>> per_bus(
      net.num_buses());
  for (int m = 0; m < net.num_buses(); ++m) {
    std::vector<BusOption> options;
    for (const std::vector<int>& route : Routes(net, net.bus_depot(m))) {
      Loads(net, route, options);
    }
    result.bus_options += static_cast<int64_t>(options.size());
    for (BusOption& opt : options) {
      bool fits = true;
      for (int k = 0; k < net.num_pickups(); ++k) {
        fits = fits && opt.picked[k] <= net.demand(net.first_pickup() + k);
      }
      if (!fits) continue;
      auto it = per_bus[m].find(opt.picked);
      if (it == per_bus[m].end() || opt.cost < it->second.cost) {
        per_bus[m][opt.picked] = std::move(opt);
      }
    }
  }

  // layers[m] maps a collected vector to (cost, vector before bus m).
  struct Entry {
    double cost;
    std::vector<int64_t> previous;
  };
  std::vector<std::map<std::vector<int64_t>, Entry>> layers(
      net.num_buses() + 1);
  layers[0][std::vector<int64_t>(net.num_pickups(), 0)] = {0.0, {}};
  for (int m = 0; m < net.num_buses(); ++m) {
    for (const auto& [state, entry] : layers[m]) {
      for (const auto& [picked, opt] : per_bus[m]) {
        std::vector<int64_t> next = state;
        bool fits = true;
        for (int k = 0; k < net.num_pickups(); ++k) {
          next[k] += picked[k];
          fits = fits && next[k] <= net.demand(net.first_pickup() + k);
        }
        if (!fits) continue;
        const double cost = entry.cost + opt.cost;
        auto it = layers[m + 1].find(next);
        if (it == layers[m + 1].end() || cost < it->second.cost) {
          layers[m + 1][next] = {cost, state};
        }
      }
    }
  }
  std::vector<int64_t> goal(net.num_pickups());
  for (int k = 0; k < net.num_pickups(); ++k) {
    goal[k] = net.demand(net.first_pickup() + k);
  }
  auto found = layers[net.num_buses()].find(goal);
  if (found == layers[net.num_buses()].end()) return result;

  result.feasible = true;
  result.objective = found->second.cost;
  const VariableSpace vs(net, /*with_bits=*/false);
  result.plan.instance = net.name();
  result.plan.mode = "oracle";
  result.plan.values.assign(vs.size(), 0.0);
  std::vector<int64_t> state = goal;
  for (int m = net.num_buses() - 1; m >= 0; --m) {
    const Entry& entry = layers[m + 1].at(state);
    std::vector<int64_t> picked(net.num_pickups());
    for (int k = 0; k < net.num_pickups(); ++k) {
      picked[k] = state[k] - entry.previous[k];
    }
    const BusOption& opt = per_bus[m].at(picked);
    const std::vector<std::vector<double>> times = MinimalTimes(net, opt.arcs);
    for (int t = 0; t < net.num_trips(); ++t) {
      for (int node = 0; node < net.num_nodes(); ++node) {
        result.plan.values[vs.T(node, m, t)] = times[t][node];
      }
      if (t < static_cast<int>(opt.arcs.size())) {
        const int arc = opt.arcs[t];
        result.plan.values[vs.X(arc, m, t)] = 1.0;
        result.plan.values[vs.B(net.arc_to(arc), m, t)] =
            static_cast<double>(opt.loads[t]);
      }
    }
    state = entry.previous;
  }
  return result;
}

}  // namespace evac

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


#include "evac/route_heuristic.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace evac {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDosePenalty = 1e9;
constexpr double kDoseSlack = 1e-9;
constexpr double kImprovement = 1e-9;

struct Visit {
  int pickup = 0;
  int64_t load = 0;
};

class Planner {
 public:
  explicit Planner(const Network& net) : net_(net) {
    const int n = net.num_nodes();
    escape_.assign(n, 0.0);
    for (int i = net.first_pickup(); i < net.first_shelter(); ++i) {
      for (int s = net.first_shelter(); s < n; ++s) {
        const int arc = net.FindArc(i, s);
        escape_[i] += net.arc_radiation(arc) * net.travel_time(arc);
      }
    }
  }

  double Travel(int from, int to) const {
    return net_.travel_time(net_.FindArc(from, to));
  }

  // Shelter minimizing travel from `pickup`, then on to `next` if >= 0.
  int BestShelter(int pickup, int next) const {
    int best = -1;
    double best_cost = kInf;
    for (int s = net_.first_shelter(); s < net_.num_nodes(); ++s) {
      const double c = Travel(pickup, s) + (next >= 0 ? Travel(s, next) : 0.0);
      if (c < best_cost) {
        best_cost = c;
        best = s;
      }
    }
    return best;
  }

  // Node sequence depot, p1, s1, p2, s2, ...; empty routes take the
  // cheapest unloaded round trip.
  std::vector<int> Nodes(int bus, const std::vector<Visit>& visits) const {
    const int depot = net_.bus_depot(bus);
    std::vector<int> nodes{depot};
    if (visits.empty()) {
      int best = -1;
      double best_cost = kInf;
      for (int p = net_.first_pickup(); p < net_.first_shelter(); ++p) {
        const double c = Travel(depot, p) + Travel(p, BestShelter(p, -1));
        if (c < best_cost) {
          best_cost = c;
          best = p;
        }
      }
      nodes.push_back(best);
      nodes.push_back(BestShelter(best, -1));
      return nodes;
    }
    for (size_t k = 0; k < visits.size(); ++k) {
      const int p = visits[k].pickup;
      nodes.push_back(p);
      nodes.push_back(
          BestShelter(p, k + 1 < visits.size() ? visits[k + 1].pickup : -1));
    }
    return nodes;
  }

  // Travel cost plus a penalty for dose over the limit.
  double Cost(int bus, const std::vector<Visit>& visits) const {
    double excess = 0.0;
    const double travel = Evaluate(bus, visits, &excess);
    return travel + kDosePenalty * excess;
  }

  // Travel time of the route; `excess` receives the dose over the limit
  // summed over pickups.
  double Evaluate(int bus, const std::vector<Visit>& visits,
                  double* excess) const {
    const std::vector<int> nodes = Nodes(bus, visits);
    double clock = 0.0;
    std::vector<double> dose(net_.num_nodes(), 0.0);
    size_t next_visit = 0;
    for (size_t k = 0; k + 1 < nodes.size(); ++k) {
      const int to = nodes[k + 1];
      if (net_.is_pickup(to) && next_visit < visits.size()) {
        const double load = static_cast<double>(visits[next_visit++].load);
        dose[to] += load * (escape_[to] + net_.node_radiation(to) * clock);
      }
      clock += Travel(nodes[k], to);
    }
    *excess = 0.0;
    for (int p = net_.first_pickup(); p < net_.first_shelter(); ++p) {
      *excess += std::max(0.0, dose[p] - net_.dose_limit());
    }
    return clock;
  }

  const Network& net() const { return net_; }

 private:
  const Network& net_;
  std::vector<double> escape_;
};

struct Solution {
  std::vector<std::vector<Visit>> routes;
  std::vector<double> cost;
  double total = kInf;
};

// Cheapest insertion of `visits` (in the given order), then local search.
Solution Improve(const Planner& planner, std::vector<Visit> visits,
                 int max_visits) {
  const Network& net = planner.net();
  const int buses = net.num_buses();
  Solution sol;
  sol.routes.assign(buses, {});
  sol.cost.resize(buses);
  for (int m = 0; m < buses; ++m) sol.cost[m] = planner.Cost(m, {});
  for (const Visit& v : visits) {
    int best_bus = -1;
    size_t best_pos = 0;
    double best_delta = kInf;
    for (int m = 0; m < buses; ++m) {
      if (static_cast<int>(sol.routes[m].size()) >= max_visits) continue;
      for (size_t pos = 0; pos <= sol.routes[m].size(); ++pos) {
        std::vector<Visit> trial = sol.routes[m];
        trial.insert(trial.begin() + pos, v);
        const double delta = planner.Cost(m, trial) - sol.cost[m];
        if (delta < best_delta) {
          best_delta = delta;
          best_bus = m;
          best_pos = pos;
        }
      }
    }
    if (best_bus < 0) return sol;
    sol.routes[best_bus].insert(sol.routes[best_bus].begin() + best_pos, v);
    sol.cost[best_bus] = planner.Cost(best_bus, sol.routes[best_bus]);
  }

  bool improved = true;
  while (improved) {
    improved = false;
    // Relocate one visit.
    for (int a = 0; a < buses && !improved; ++a) {
      for (size_t i = 0; i < sol.routes[a].size() && !improved; ++i) {
        std::vector<Visit> from = sol.routes[a];
        const Visit v = from[i];
        from.erase(from.begin() + i);
        const double from_cost = planner.Cost(a, from);
        for (int b = 0; b < buses && !improved; ++b) {
          const std::vector<Visit>& base = b == a ? from : sol.routes[b];
          if (static_cast<int>(base.size()) >= max_visits) continue;
          for (size_t pos = 0; pos <= base.size() && !improved; ++pos) {
            std::vector<Visit> to = base;
            to.insert(to.begin() + pos, v);
            double before, after;
            if (b == a) {
              before = sol.cost[a];
              after = planner.Cost(a, to);
            } else {
              before = sol.cost[a] + sol.cost[b];
              after = from_cost + planner.Cost(b, to);
            }
            if (after < before - kImprovement) {
              if (b == a) {
                sol.routes[a] = std::move(to);
              } else {
                sol.routes[a] = from;
                sol.routes[b] = std::move(to);
                sol.cost[b] = planner.Cost(b, sol.routes[b]);
              }
              sol.cost[a] = planner.Cost(a, sol.routes[a]);
              improved = true;
            }
          }
        }
      }
    }
    // Swap two visits on different buses.
    for (int a = 0; a < buses && !improved; ++a) {
      for (int b = a + 1; b < buses && !improved; ++b) {
        for (size_t i = 0; i < sol.routes[a].size() && !improved; ++i) {
          for (size_t j = 0; j < sol.routes[b].size() && !improved; ++j) {
            std::vector<Visit> ra = sol.routes[a], rb = sol.routes[b];
            std::swap(ra[i], rb[j]);
            const double ca = planner.Cost(a, ra), cb = planner.Cost(b, rb);
            if (ca + cb < sol.cost[a] + sol.cost[b] - kImprovement) {
              sol.routes[a] = std::move(ra);
              sol.routes[b] = std::move(rb);
              sol.cost[a] = ca;
              sol.cost[b] = cb;
              improved = true;
            }
          }
        }
      }
    }
  }
  sol.total = std::accumulate(sol.cost.begin(), sol.cost.end(), 0.0);
  return sol;
}

}  // namespace

absl::StatusOr<std::optional<EvacuationPlan>> ConstructPlan(
    const Network& net, const HeuristicOptions& options) {
  const int max_visits = net.num_trips() / 2;
  if (max_visits == 0) return std::optional<EvacuationPlan>();
  const int64_t q = net.capacity();
  std::vector<Visit> visits;
  for (int p = net.first_pickup(); p < net.first_shelter(); ++p) {
    int64_t left = net.demand(p);
    while (left > 0) {
      visits.push_back({p, std::min(left, q)});
      left -= q;
    }
  }
  if (static_cast<int64_t>(visits.size()) >
      static_cast<int64_t>(net.num_buses()) * max_visits) {
    return std::optional<EvacuationPlan>();
  }

  const Planner planner(net);
  std::mt19937_64 rng(options.seed);
  Solution best;
  for (int round = 0; round < std::max(1, options.restarts); ++round) {
    std::vector<Visit> order = visits;
    if (round == 0) {
      // Most expensive pickups first.
      std::stable_sort(order.begin(), order.end(),
                       [&](const Visit& a, const Visit& b) {
                         return planner.Travel(net.bus_depot(0), a.pickup) >
                                planner.Travel(net.bus_depot(0), b.pickup);
                       });
    } else {
      std::shuffle(order.begin(), order.end(), rng);
    }
    Solution sol = Improve(planner, std::move(order), max_visits);
    if (sol.total < best.total) best = std::move(sol);
  }
  if (!std::isfinite(best.total)) return std::optional<EvacuationPlan>();
  for (int m = 0; m < net.num_buses(); ++m) {
    double excess = 0.0;
    planner.Evaluate(m, best.routes[m], &excess);
    if (excess > kDoseSlack) return std::optional<EvacuationPlan>();
  }

  const VariableSpace vs(net, /*with_bits=*/false);
  EvacuationPlan plan{net.name(), "heuristic",
                      std::vector<double>(vs.size(), 0.0)};
  for (int m = 0; m < net.num_buses(); ++m) {
    const std::vector<Visit>& route = best.routes[m];
    const std::vector<int> nodes = planner.Nodes(m, route);
    double clock = 0.0;
    size_t visit = 0;
    int64_t onboard = 0;
    for (int t = 0; t < net.num_trips(); ++t) {
      for (int node = 0; node < net.num_nodes(); ++node) {
        plan.values[vs.T(node, m, t)] = clock;
      }
      if (t + 1 >= static_cast<int>(nodes.size())) continue;
      const int from = nodes[t], to = nodes[t + 1];
      plan.values[vs.X(net.FindArc(from, to), m, t)] = 1.0;
      if (net.is_pickup(to)) {
        onboard = visit < route.size() ? route[visit++].load : 0;
        plan.values[vs.B(to, m, t)] = static_cast<double>(onboard);
      } else {
        plan.values[vs.B(to, m, t)] = static_cast<double>(onboard);
        onboard = 0;
      }
      clock += planner.Travel(from, to);
    }
  }
  return std::optional<EvacuationPlan>(std::move(plan));
}

}  // namespace evac

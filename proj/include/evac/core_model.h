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

// Evacuation network data and the decision-variable index space shared by
// the formulation, the linearizer and the solvers.
//
// Units are seconds for travel and visit times, millisievert for doses and
// millisievert per second for radiation rates.

#ifndef EVAC_CORE_MODEL_H_
#define EVAC_CORE_MODEL_H_

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"

namespace evac {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Arc {
  std::string from;
  std::string to;
  double travel_time = 0.0;
  double radiation = 0.0;
};

struct Bus {
  std::string id;
  std::string depot;
};

// Scenario data as loaded or generated. Nothing is checked at construction;
// run ValidateInstance() or Network::Create() before using it.
struct EvacuationInstance {
  std::string name;
  std::vector<std::string> depots;
  std::vector<std::string> pickups;
  std::vector<std::string> shelters;
  std::vector<Arc> arcs;
  // Keyed by pickup id.
  std::map<std::string, double> node_radiation;
  std::map<std::string, int64_t> demand;
  double dose_limit = kInfinity;
  int64_t capacity = 0;
  int trips = 0;
  std::vector<Bus> buses;
};

struct InstanceViolation {
  std::string field;
  std::string rule;
};

// Returns every broken data rule; an empty result means the instance is
// well formed.
std::vector<InstanceViolation> ValidateInstance(
    const EvacuationInstance& instance);

enum class NodeKind { kDepot, kPickup, kShelter };

// Indexed view of a validated instance.
//
// Node order is depots, then pickups, then shelters, each block sorted by id.
// Arcs are sorted by (from, to) in node order. The pickup and shelter blocks
// together form the "service" nodes, which carry the load variables b, y, v;
// service index s corresponds to node num_depots() + s.
class Network {
 public:
  static absl::StatusOr<Network> Create(const EvacuationInstance& instance);

  const std::string& name() const { return name_; }
  int num_nodes() const { return static_cast<int>(node_ids_.size()); }
  int num_depots() const { return num_depots_; }
  int num_pickups() const { return num_pickups_; }
  int num_shelters() const { return num_nodes() - num_depots_ - num_pickups_; }
  int num_service_nodes() const { return num_nodes() - num_depots_; }
  int num_arcs() const { return static_cast<int>(arc_from_.size()); }
  int num_buses() const { return static_cast<int>(bus_ids_.size()); }
  int num_trips() const { return trips_; }
  int64_t capacity() const { return capacity_; }
  double dose_limit() const { return dose_limit_; }

  const std::string& node_id(int node) const { return node_ids_[node]; }
  NodeKind kind(int node) const;
  bool is_depot(int node) const { return node < num_depots_; }
  bool is_pickup(int node) const {
    return node >= num_depots_ && node < num_depots_ + num_pickups_;
  }
  bool is_shelter(int node) const {
    return node >= num_depots_ + num_pickups_;
  }
  int first_pickup() const { return num_depots_; }
  int first_shelter() const { return num_depots_ + num_pickups_; }
  // Returns -1 for unknown ids.
  int FindNode(std::string_view id) const;

  int arc_from(int arc) const { return arc_from_[arc]; }
  int arc_to(int arc) const { return arc_to_[arc]; }
  double travel_time(int arc) const { return travel_time_[arc]; }
  double arc_radiation(int arc) const { return arc_radiation_[arc]; }
  // Returns -1 when (from, to) is not an arc.
  int FindArc(int from, int to) const { return arc_lookup_[from][to]; }
  const std::vector<int>& in_arcs(int node) const { return in_arcs_[node]; }
  const std::vector<int>& out_arcs(int node) const { return out_arcs_[node]; }
  double max_travel_time() const { return max_travel_time_; }

  // Zero for depots and shelters.
  double node_radiation(int node) const { return node_radiation_[node]; }
  int64_t demand(int node) const { return demand_[node]; }
  int64_t total_demand() const;

  const std::string& bus_id(int bus) const { return bus_ids_[bus]; }
  int bus_depot(int bus) const { return bus_depot_[bus]; }

 private:
  Network() = default;

  std::string name_;
  std::vector<std::string> node_ids_;
  std::unordered_map<std::string, int> node_lookup_;
  int num_depots_ = 0;
  int num_pickups_ = 0;
  std::vector<int> arc_from_;
  std::vector<int> arc_to_;
  std::vector<double> travel_time_;
  std::vector<double> arc_radiation_;
  std::vector<std::vector<int>> arc_lookup_;
  std::vector<std::vector<int>> in_arcs_;
  std::vector<std::vector<int>> out_arcs_;
  double max_travel_time_ = 0.0;
  std::vector<double> node_radiation_;
  std::vector<int64_t> demand_;
  std::vector<std::string> bus_ids_;
  std::vector<int> bus_depot_;
  int64_t capacity_ = 0;
  double dose_limit_ = kInfinity;
  int trips_ = 0;
};

// Upper bound on every visit time: trip t (1-based) of any bus cannot start
// later than t times the longest arc, since each trip crosses at most one
// arc.
class TimeUpperBound {
 public:
  explicit TimeUpperBound(const Network& network);

  // `trip` is 0-based.
  double at(int node, int bus, int trip) const {
    return bound_[(static_cast<size_t>(node) * num_buses_ + bus) * num_trips_ +
                  trip];
  }

 private:
  int num_buses_;
  int num_trips_;
  std::vector<double> bound_;
};

absl::StatusOr<TimeUpperBound> ComputeTimeUpperBound(
    const EvacuationInstance& instance);

enum class VarKind { kX = 0, kT = 1, kB = 2, kY = 3, kV = 4 };

// Subscripts of one decision variable. Unused fields stay at -1. `trip` is
// 0-based here and 1-based in names.
struct VariableKey {
  VarKind kind = VarKind::kX;
  int arc = -1;
  int node = -1;
  int bus = -1;
  int trip = -1;
  int bit = -1;

  friend bool operator==(const VariableKey&, const VariableKey&) = default;
};

// Flat, deterministic numbering of the decision variables:
//   x[arc][bus][trip], T[node][bus][trip], b[service][bus][trip],
//   and with bits: y[service][bus][trip][bit], v[service][bus][trip][bit].
// Kinds are laid out in that order, so the space without bits is a prefix of
// the space with bits.
class VariableSpace {
 public:
  VariableSpace(const Network& network, bool with_bits);

  int size() const { return size_; }
  bool with_bits() const { return with_bits_; }
  int bit_width() const { return bit_width_; }
  int count(VarKind kind) const;
  int offset(VarKind kind) const;

  int X(int arc, int bus, int trip) const {
    return offset_x_ + (arc * num_buses_ + bus) * num_trips_ + trip;
  }
  int T(int node, int bus, int trip) const {
    return offset_t_ + (node * num_buses_ + bus) * num_trips_ + trip;
  }
  // `node` is a network node id of a pickup or shelter.
  int B(int node, int bus, int trip) const {
    return offset_b_ +
           ((node - num_depots_) * num_buses_ + bus) * num_trips_ + trip;
  }
  int Y(int node, int bus, int trip, int bit) const {
    return offset_y_ + Bitless(node, bus, trip) * bit_width_ + bit;
  }
  int V(int node, int bus, int trip, int bit) const {
    return offset_v_ + Bitless(node, bus, trip) * bit_width_ + bit;
  }

  VariableKey Key(int position) const;
  int Position(const VariableKey& key) const;
  std::string Name(int position) const;
  std::unordered_map<std::string, int> NameIndex() const;

 private:
  int Bitless(int node, int bus, int trip) const {
    return ((node - num_depots_) * num_buses_ + bus) * num_trips_ + trip;
  }

  std::vector<std::string> node_ids_;
  std::vector<int> arc_from_;
  std::vector<int> arc_to_;
  int num_depots_;
  int num_service_;
  int num_buses_;
  int num_trips_;
  bool with_bits_;
  int bit_width_ = 0;
  int offset_x_ = 0;
  int offset_t_ = 0;
  int offset_b_ = 0;
  int offset_y_ = 0;
  int offset_v_ = 0;
  int size_ = 0;
};

}  // namespace evac

#endif  // EVAC_CORE_MODEL_H_

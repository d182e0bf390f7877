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

#include "evac/core_model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "evac/binary_expansion.h"

namespace evac {
namespace {

bool IsValidBusId(const std::string& id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isspace(c) || c == '#';
  });
}

// Node ids appear inside '_'-separated variable names.
bool IsValidNodeId(const std::string& id) {
  return IsValidBusId(id) && id.find('_') == std::string::npos;
}

std::string ArcName(const Arc& arc) {
  return absl::StrCat(arc.from, "->", arc.to);
}

}  // namespace

std::vector<InstanceViolation> ValidateInstance(
    const EvacuationInstance& instance) {
  std::vector<InstanceViolation> out;
  auto report = [&out](std::string field, std::string rule) {
    out.push_back({std::move(field), std::move(rule)});
  };

  std::map<std::string, NodeKind> kinds;
  auto declare = [&](const std::vector<std::string>& ids, NodeKind kind,
                     const char* field) {
    for (const std::string& id : ids) {
      if (!IsValidNodeId(id)) {
        report(absl::StrCat(field, "[", id, "]"),
               "node id must be non-empty without whitespace, '#' or '_'");
        continue;
      }
      if (!kinds.emplace(id, kind).second) {
        report(absl::StrCat(field, "[", id, "]"), "node id declared twice");
      }
    }
  };
  declare(instance.depots, NodeKind::kDepot, "depots");
  declare(instance.pickups, NodeKind::kPickup, "pickups");
  declare(instance.shelters, NodeKind::kShelter, "shelters");

  std::set<std::pair<std::string, std::string>> seen;
  for (const Arc& arc : instance.arcs) {
    const std::string field = absl::StrCat("arcs[", ArcName(arc), "]");
    auto from = kinds.find(arc.from);
    auto to = kinds.find(arc.to);
    if (from == kinds.end() || to == kinds.end()) {
      report(field, "arc references an undeclared node");
      continue;
    }
    const bool allowed =
        (from->second == NodeKind::kDepot && to->second == NodeKind::kPickup) ||
        (from->second == NodeKind::kPickup &&
         to->second == NodeKind::kShelter) ||
        (from->second == NodeKind::kShelter && to->second == NodeKind::kPickup);
    if (!allowed) {
      report(field, "arc set only allows depot->pickup, pickup->shelter and "
                    "shelter->pickup");
    }
    if (!seen.emplace(arc.from, arc.to).second) {
      report(field, "arc listed twice");
    }
    if (!(arc.travel_time > 0.0) || !std::isfinite(arc.travel_time)) {
      report(field, "travel time must be positive and finite");
    }
    if (!(arc.radiation >= 0.0) || !std::isfinite(arc.radiation)) {
      report(field, "arc radiation must be nonnegative and finite");
    }
  }
  auto require_arcs = [&](const std::vector<std::string>& from,
                          const std::vector<std::string>& to) {
    for (const std::string& i : from) {
      for (const std::string& j : to) {
        if (!seen.contains({i, j})) {
          report(absl::StrCat("arcs[", i, "->", j, "]"),
                 "required arc is missing");
        }
      }
    }
  };
  require_arcs(instance.depots, instance.pickups);
  require_arcs(instance.pickups, instance.shelters);
  require_arcs(instance.shelters, instance.pickups);

  for (const auto& [id, rate] : instance.node_radiation) {
    auto it = kinds.find(id);
    if (it == kinds.end() || it->second != NodeKind::kPickup) {
      report(absl::StrCat("node_radiation[", id, "]"),
             "node radiation is only defined for pickups");
    } else if (!(rate >= 0.0) || !std::isfinite(rate)) {
      report(absl::StrCat("node_radiation[", id, "]"),
             "node radiation must be nonnegative and finite");
    }
  }
  for (const auto& [id, count] : instance.demand) {
    auto it = kinds.find(id);
    if (it == kinds.end() || it->second != NodeKind::kPickup) {
      report(absl::StrCat("demand[", id, "]"),
             "demand is only defined for pickups");
    } else if (count < 0) {
      report(absl::StrCat("demand[", id, "]"), "demand nonnegative");
    }
  }
  if (!(instance.dose_limit >= 0.0)) {
    report("dose_limit", "dose limit nonnegative");
  }
  if (instance.capacity < 1) {
    report("capacity", "capacity must be a positive integer");
  }
  if (instance.trips < 1) {
    report("trips", "trip horizon must be at least 1");
  }
  std::set<std::string> bus_ids;
  for (const Bus& bus : instance.buses) {
    const std::string field = absl::StrCat("buses[", bus.id, "]");
    if (!IsValidBusId(bus.id)) {
      report(field, "bus id must be non-empty without whitespace or '#'");
    }
    if (!bus_ids.insert(bus.id).second) report(field, "bus id listed twice");
    auto it = kinds.find(bus.depot);
    if (it == kinds.end() || it->second != NodeKind::kDepot) {
      report(field, "home depot must be a declared depot");
    }
  }
  return out;
}

NodeKind Network::kind(int node) const {
  if (is_depot(node)) return NodeKind::kDepot;
  if (is_pickup(node)) return NodeKind::kPickup;
  return NodeKind::kShelter;
}

int Network::FindNode(std::string_view id) const {
  auto it = node_lookup_.find(std::string(id));
  return it == node_lookup_.end() ? -1 : it->second;
}

int64_t Network::total_demand() const {
  int64_t total = 0;
  for (int64_t d : demand_) total += d;
  return total;
}

absl::StatusOr<Network> Network::Create(const EvacuationInstance& instance) {
  const std::vector<InstanceViolation> violations = ValidateInstance(instance);
  if (!violations.empty()) {
    std::vector<std::string> lines;
    for (const auto& v : violations) {
      lines.push_back(absl::StrCat(v.field, ": ", v.rule));
    }
    return absl::InvalidArgumentError(
        absl::StrCat("invalid instance: ", absl::StrJoin(lines, "; ")));
  }

  Network net;
  net.name_ = instance.name;
  auto append_sorted = [&net](std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    for (std::string& id : ids) net.node_ids_.push_back(std::move(id));
  };
  append_sorted(instance.depots);
  append_sorted(instance.pickups);
  append_sorted(instance.shelters);
  net.num_depots_ = static_cast<int>(instance.depots.size());
  net.num_pickups_ = static_cast<int>(instance.pickups.size());
  const int n = net.num_nodes();
  for (int i = 0; i < n; ++i) net.node_lookup_[net.node_ids_[i]] = i;

  struct IndexedArc {
    int from;
    int to;
    double travel;
    double tau;
  };
  std::vector<IndexedArc> arcs;
  for (const Arc& arc : instance.arcs) {
    arcs.push_back({net.node_lookup_.at(arc.from), net.node_lookup_.at(arc.to),
                    arc.travel_time, arc.radiation});
  }
  std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) {
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  });
  net.arc_lookup_.assign(n, std::vector<int>(n, -1));
  net.in_arcs_.assign(n, {});
  net.out_arcs_.assign(n, {});
  for (const IndexedArc& arc : arcs) {
    const int index = static_cast<int>(net.arc_from_.size());
    net.arc_from_.push_back(arc.from);
    net.arc_to_.push_back(arc.to);
    net.travel_time_.push_back(arc.travel);
    net.arc_radiation_.push_back(arc.tau);
    net.arc_lookup_[arc.from][arc.to] = index;
    net.out_arcs_[arc.from].push_back(index);
    net.in_arcs_[arc.to].push_back(index);
    net.max_travel_time_ = std::max(net.max_travel_time_, arc.travel);
  }

  net.node_radiation_.assign(n, 0.0);
  net.demand_.assign(n, 0);
  for (const auto& [id, rate] : instance.node_radiation) {
    net.node_radiation_[net.node_lookup_.at(id)] = rate;
  }
  for (const auto& [id, count] : instance.demand) {
    net.demand_[net.node_lookup_.at(id)] = count;
  }
  for (const Bus& bus : instance.buses) {
    net.bus_ids_.push_back(bus.id);
    net.bus_depot_.push_back(net.node_lookup_.at(bus.depot));
  }
  net.capacity_ = instance.capacity;
  net.dose_limit_ = instance.dose_limit;
  net.trips_ = instance.trips;
  return net;
}

TimeUpperBound::TimeUpperBound(const Network& network)
    : num_buses_(network.num_buses()), num_trips_(network.num_trips()) {
  const int n = network.num_nodes();
  bound_.resize(static_cast<size_t>(n) * num_buses_ * num_trips_);
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < num_buses_; ++m) {
      for (int t = 0; t < num_trips_; ++t) {
        bound_[(static_cast<size_t>(i) * num_buses_ + m) * num_trips_ + t] =
            (t + 1) * network.max_travel_time();
      }
    }
  }
}

absl::StatusOr<TimeUpperBound> ComputeTimeUpperBound(
    const EvacuationInstance& instance) {
  absl::StatusOr<Network> network = Network::Create(instance);
  if (!network.ok()) return network.status();
  return TimeUpperBound(*network);
}

VariableSpace::VariableSpace(const Network& network, bool with_bits)
    : node_ids_(network.num_nodes()),
      arc_from_(network.num_arcs()),
      arc_to_(network.num_arcs()),
      num_depots_(network.num_depots()),
      num_service_(network.num_service_nodes()),
      num_buses_(network.num_buses()),
      num_trips_(network.num_trips()),
      with_bits_(with_bits) {
  for (int i = 0; i < network.num_nodes(); ++i) {
    node_ids_[i] = network.node_id(i);
  }
  for (int a = 0; a < network.num_arcs(); ++a) {
    arc_from_[a] = network.arc_from(a);
    arc_to_[a] = network.arc_to(a);
  }
  if (with_bits_) bit_width_ = BitWidth(network.capacity()).value();
  const int per_route = num_buses_ * num_trips_;
  offset_x_ = 0;
  offset_t_ = offset_x_ + network.num_arcs() * per_route;
  offset_b_ = offset_t_ + network.num_nodes() * per_route;
  offset_y_ = offset_b_ + num_service_ * per_route;
  offset_v_ = offset_y_ + num_service_ * per_route * bit_width_;
  size_ = offset_v_ + num_service_ * per_route * bit_width_;
}

int VariableSpace::count(VarKind kind) const {
  switch (kind) {
    case VarKind::kX:
      return offset_t_ - offset_x_;
    case VarKind::kT:
      return offset_b_ - offset_t_;
    case VarKind::kB:
      return offset_y_ - offset_b_;
    case VarKind::kY:
      return offset_v_ - offset_y_;
    case VarKind::kV:
      return size_ - offset_v_;
  }
  return 0;
}

int VariableSpace::offset(VarKind kind) const {
  switch (kind) {
    case VarKind::kX:
      return offset_x_;
    case VarKind::kT:
      return offset_t_;
    case VarKind::kB:
      return offset_b_;
    case VarKind::kY:
      return offset_y_;
    case VarKind::kV:
      return offset_v_;
  }
  return 0;
}

VariableKey VariableSpace::Key(int position) const {
  VariableKey key;
  int rest;
  if (position < offset_t_) {
    key.kind = VarKind::kX;
    rest = position - offset_x_;
  } else if (position < offset_b_) {
    key.kind = VarKind::kT;
    rest = position - offset_t_;
  } else if (position < offset_y_) {
    key.kind = VarKind::kB;
    rest = position - offset_b_;
  } else if (position < offset_v_) {
    key.kind = VarKind::kY;
    rest = position - offset_y_;
  } else {
    key.kind = VarKind::kV;
    rest = position - offset_v_;
  }
  if (key.kind == VarKind::kY || key.kind == VarKind::kV) {
    key.bit = rest % bit_width_;
    rest /= bit_width_;
  }
  key.trip = rest % num_trips_;
  rest /= num_trips_;
  key.bus = rest % num_buses_;
  rest /= num_buses_;
  switch (key.kind) {
    case VarKind::kX:
      key.arc = rest;
      break;
    case VarKind::kT:
      key.node = rest;
      break;
    default:
      key.node = rest + num_depots_;
      break;
  }
  return key;
}

int VariableSpace::Position(const VariableKey& key) const {
  switch (key.kind) {
    case VarKind::kX:
      return X(key.arc, key.bus, key.trip);
    case VarKind::kT:
      return T(key.node, key.bus, key.trip);
    case VarKind::kB:
      return B(key.node, key.bus, key.trip);
    case VarKind::kY:
      return Y(key.node, key.bus, key.trip, key.bit);
    case VarKind::kV:
      return V(key.node, key.bus, key.trip, key.bit);
  }
  return -1;
}

std::string VariableSpace::Name(int position) const {
  const VariableKey key = Key(position);
  const std::string suffix =
      absl::StrCat("_m", key.bus + 1, "_t", key.trip + 1);
  switch (key.kind) {
    case VarKind::kX:
      return absl::StrCat("x_", node_ids_[arc_from_[key.arc]], "_",
                          node_ids_[arc_to_[key.arc]], suffix);
    case VarKind::kT:
      return absl::StrCat("Tv_", node_ids_[key.node], suffix);
    case VarKind::kB:
      return absl::StrCat("b_", node_ids_[key.node], suffix);
    case VarKind::kY:
      return absl::StrCat("y", key.bit, "_", node_ids_[key.node], suffix);
    case VarKind::kV:
      return absl::StrCat("v", key.bit, "_", node_ids_[key.node], suffix);
  }
  return {};
}

std::unordered_map<std::string, int> VariableSpace::NameIndex() const {
  std::unordered_map<std::string, int> index;
  index.reserve(size_);
  for (int p = 0; p < size_; ++p) index.emplace(Name(p), p);
  return index;
}

}  // namespace evac

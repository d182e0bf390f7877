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


// Constructive plans for the evacuation model.
//
// Every bus runs depot -> pickup -> shelter and may repeat shelter -> pickup
// -> shelter while the horizon allows. Pickup i needs ceil(D_i / Q) visits;
// visits are placed by cheapest insertion in a seeded random order and then
// improved by relocate and swap moves until no move helps. Buses without a
// visit take the cheapest empty round trip, since every bus must leave its
// depot. Loads fill each visit to Q, the remainder going to the last visit.

#ifndef EVAC_ROUTE_HEURISTIC_H_
#define EVAC_ROUTE_HEURISTIC_H_

#include <cstdint>
#include <optional>

#include "absl/status/statusor.h"
#include "evac/core_model.h"
#include "evac/formulation.h"

namespace evac {

struct HeuristicOptions {
  uint64_t seed = 0;
  int restarts = 16;
};

// A plan without bit variables, or nullopt when no route set of this shape
// fits the horizon, the visit count or the dose limit.
absl::StatusOr<std::optional<EvacuationPlan>> ConstructPlan(
    const Network& network, const HeuristicOptions& options = {});

}  // namespace evac

#endif  // EVAC_ROUTE_HEURISTIC_H_

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

// Seeded random scenarios and the .evac instance file format.
//
// A .evac file holds one instance. Tokens are whitespace separated, '#'
// starts a comment, and sections may come in any order but each appears
// exactly once before END:
//
//   NAME T1
//   NODES                # id kind [eta for pickups]
//     d depot
//     p pickup 0.002
//     s shelter
//   ARCS                 # from to travel_s tau
//     d p 5 0
//   PARAMS               # Q, T and dose_limit (inf allowed)
//     Q 2
//     T 4
//     dose_limit inf
//   DEMAND               # pickup count
//     p 3
//   BUSES                # id depot
//     m1 d
//   END

#ifndef EVAC_SCENARIO_IO_H_
#define EVAC_SCENARIO_IO_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "evac/core_model.h"

namespace evac {

struct GeneratorConfig {
  std::string name = "generated";
  int depots = 1;
  int pickups = 5;
  int shelters = 2;
  int buses = 8;
  int64_t capacity = 10;
  int trips = 4;
  int64_t demand_min = 10;
  int64_t demand_max = 40;
  double travel_min = 60.0;  // seconds
  double travel_max = 600.0;
  double tau_min = 1e-5;  // mSv/s
  double tau_max = 1e-4;
  double eta_min = 1e-5;
  double eta_max = 1e-4;
  double dose_limit = 50.0;  // mSv
  uint64_t seed = 1;
};

absl::Status ValidateGeneratorConfig(const GeneratorConfig& config);

// Depots d1.., pickups p01.., shelters s01.., buses v01.. (zero padded to
// the width of the largest index). Buses are spread over depots round-robin.
// Travel times are rounded to 0.01 s and rates to 1e-7. Each arc pair
// p <-> s shares one sampled road. Each bus can serve at most floor(T / 2)
// pickups; when sampled demand needs more visits than the fleet has, it is
// scaled down and then the smallest partial loads are trimmed to a multiple
// of Q until it fits.
absl::StatusOr<EvacuationInstance> Generate(const GeneratorConfig& config);

// "key value" lines with '#' comments; keys are the field names above.
absl::StatusOr<GeneratorConfig> ParseGeneratorConfig(std::string_view text);

std::string SaveInstance(const EvacuationInstance& instance);

// Schema errors name the offending field, e.g. "PARAMS.dose_limit".
absl::StatusOr<EvacuationInstance> LoadInstance(std::string_view text);

}  // namespace evac

#endif  // EVAC_SCENARIO_IO_H_

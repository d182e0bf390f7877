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

// Plan files: header comments followed by one "name value" line per nonzero
// variable, in variable order. A "# bits" line marks plans that carry the
// y and v variables.
//
//   # evacuation-plan
//   # instance T1
//   # mode exact
//   x_d_p_m1_t1 1
//   Tv_p_m1_t2 5
//
// Binary and integer variables are printed as integers, the rest in the
// shortest form that reads back to the same double.

#ifndef EVAC_PLAN_IO_H_
#define EVAC_PLAN_IO_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "evac/core_model.h"
#include "evac/formulation.h"

namespace evac {

absl::StatusOr<std::string> WritePlan(const Network& network,
                                      const EvacuationPlan& plan);

// Values land in the space with bit variables when the file has the
// "# bits" line or names any y or v variable, otherwise in the space without
// them.
absl::StatusOr<EvacuationPlan> ReadPlan(const Network& network,
                                        std::string_view text);

}  // namespace evac

#endif  // EVAC_PLAN_IO_H_

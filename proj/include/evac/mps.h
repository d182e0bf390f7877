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

// Fixed-format MPS writer and reader.
//
// Names live in 8-character fields. Longer (or colliding) names are written
// as a truncated prefix plus '~' and a base-36 ordinal; every such rename is
// returned to the caller. Numbers use 12 significant digits; a number longer
// than its 12-character field spills to the right, still separated by
// blanks. The objective row is named OBJ. Metadata travels as "* instance:"
// and "* mode:" comment lines after NAME.

#ifndef EVAC_MPS_H_
#define EVAC_MPS_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "evac/milp_problem.h"

namespace evac {

inline constexpr int kMpsNameWidth = 8;

struct MpsRename {
  bool is_row = false;
  std::string original;
  std::string written;
};

struct MpsDocument {
  std::string text;
  std::vector<MpsRename> renamed;
};

MpsDocument ExportMps(const MilpProblem& problem);

// Errors carry the 1-based line number.
absl::StatusOr<MilpProblem> ImportMps(std::string_view text);

}  // namespace evac

#endif  // EVAC_MPS_H_

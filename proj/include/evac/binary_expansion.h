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

// Little-endian binary expansion of bounded integers, b = sum_n 2^n y_n with
// n = 0 .. width-1.

#ifndef EVAC_BINARY_EXPANSION_H_
#define EVAC_BINARY_EXPANSION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace evac {

// Smallest width B with 2^B - 1 >= capacity. Requires capacity >= 1.
absl::StatusOr<int> BitWidth(int64_t capacity);

// Requires 0 <= value <= 2^width - 1.
absl::StatusOr<std::vector<int>> EncodeBits(int64_t value, int width);

int64_t DecodeBits(std::span<const int> bits);

}  // namespace evac

#endif  // EVAC_BINARY_EXPANSION_H_

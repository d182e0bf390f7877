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

#include "evac/binary_expansion.h"

#include "absl/strings/str_cat.h"

namespace evac {

absl::StatusOr<int> BitWidth(int64_t capacity) {
  if (capacity < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("bit width needs a capacity >= 1, got ", capacity));
  }
  int width = 0;
  while (width < 62 && ((int64_t{1} << width) - 1) < capacity) ++width;
  return width;
}

absl::StatusOr<std::vector<int>> EncodeBits(int64_t value, int width) {
  if (width < 0 || width > 62) {
    return absl::InvalidArgumentError(absl::StrCat("bad bit width ", width));
  }
  if (value < 0 || value > (int64_t{1} << width) - 1) {
    return absl::OutOfRangeError(absl::StrCat(
        value, " does not fit in ", width, " bits"));
  }
  std::vector<int> bits(width);
  for (int n = 0; n < width; ++n) bits[n] = static_cast<int>((value >> n) & 1);
  return bits;
}

int64_t DecodeBits(std::span<const int> bits) {
  int64_t value = 0;
  for (size_t n = 0; n < bits.size(); ++n) {
    if (bits[n] != 0) value |= int64_t{1} << n;
  }
  return value;
}

}  // namespace evac

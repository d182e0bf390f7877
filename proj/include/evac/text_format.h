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

// Locale-independent number formatting shared by the text file formats.

#ifndef EVAC_TEXT_FORMAT_H_
#define EVAC_TEXT_FORMAT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace evac {

// Shortest decimal form that reads back to the same double; "inf" for
// +infinity and "0" for both zeros.
std::string FormatNumber(double value);

// Whole-token parses. ParseDouble accepts "inf" only when allow_infinity.
std::optional<double> ParseDouble(std::string_view token,
                                  bool allow_infinity = false);
std::optional<int64_t> ParseInt(std::string_view token);

}  // namespace evac

#endif  // EVAC_TEXT_FORMAT_H_

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

#include "evac/plan_io.h"

#include <cmath>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "evac/text_format.h"

namespace evac {
namespace {

constexpr absl::string_view kMagic = "# evacuation-plan";
constexpr absl::string_view kBitsHeader = "# bits";

absl::Status LineError(int line, absl::string_view message) {
  return absl::InvalidArgumentError(
      absl::StrCat("plan line ", line, ": ", message));
}

}  // namespace

absl::StatusOr<std::string> WritePlan(const Network& network,
                                      const EvacuationPlan& plan) {
  const VariableSpace bitless(network, /*with_bits=*/false);
  const VariableSpace with_bits(network, /*with_bits=*/true);
  const int size = static_cast<int>(plan.values.size());
  if (size != bitless.size() && size != with_bits.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "plan has ", size, " values; expected ", bitless.size(), " or ",
        with_bits.size()));
  }
  std::string out = absl::StrCat(kMagic, "\n# instance ", plan.instance,
                                  "\n# mode ", plan.mode, "\n");
  if (size == with_bits.size()) absl::StrAppend(&out, kBitsHeader, "\n");
  for (int p = 0; p < size; ++p) {
    const double v = plan.values[p];
    if (v == 0.0) continue;
    const VarKind kind = with_bits.Key(p).kind;
    const bool integral = kind == VarKind::kX || kind == VarKind::kB ||
                          kind == VarKind::kY;
    std::string number;
    if (integral && v == std::round(v) && std::abs(v) < 9e15) {
      number = absl::StrCat(static_cast<int64_t>(v));
    } else {
      number = FormatNumber(v);
    }
    absl::StrAppend(&out, with_bits.Name(p), " ", number, "\n");
  }
  return out;
}

absl::StatusOr<EvacuationPlan> ReadPlan(const Network& network,
                                        std::string_view input) {
  const absl::string_view text(input.data(), input.size());
  const VariableSpace bitless(network, /*with_bits=*/false);
  const VariableSpace with_bits(network, /*with_bits=*/true);
  const auto index = with_bits.NameIndex();

  EvacuationPlan plan;
  std::vector<double> values(with_bits.size(), 0.0);
  std::vector<bool> seen(with_bits.size(), false);
  bool uses_bits = false;
  bool magic = false;
  int line_number = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_number;
    absl::string_view line = absl::StripAsciiWhitespace(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line == kMagic) {
        magic = true;
      } else if (line == kBitsHeader) {
        uses_bits = true;
      } else if (absl::ConsumePrefix(&line, "# instance")) {
        plan.instance = std::string(absl::StripAsciiWhitespace(line));
      } else if (absl::ConsumePrefix(&line, "# mode")) {
        plan.mode = std::string(absl::StripAsciiWhitespace(line));
      }
      continue;
    }
    std::vector<absl::string_view> tokens =
        absl::StrSplit(line, absl::ByAnyChar(" \t"), absl::SkipEmpty());
    if (tokens.size() != 2) {
      return LineError(line_number, "expected '<variable> <value>'");
    }
    auto it = index.find(std::string(tokens[0]));
    if (it == index.end()) {
      return LineError(line_number,
                       absl::StrCat("unknown variable '", tokens[0], "'"));
    }
    const std::optional<double> value =
        ParseDouble(std::string_view(tokens[1].data(), tokens[1].size()));
    if (!value.has_value()) {
      return LineError(line_number,
                       absl::StrCat("bad number '", tokens[1], "'"));
    }
    if (seen[it->second]) {
      return LineError(line_number,
                       absl::StrCat("variable '", tokens[0], "' listed twice"));
    }
    seen[it->second] = true;
    values[it->second] = *value;
    if (it->second >= bitless.size()) uses_bits = true;
  }
  if (!magic) {
    return absl::InvalidArgumentError(
        absl::StrCat("plan is missing the '", kMagic, "' header"));
  }
  if (!uses_bits) values.resize(bitless.size());
  plan.values = std::move(values);
  return plan;
}

}  // namespace evac

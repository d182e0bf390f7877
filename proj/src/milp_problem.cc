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

#include "evac/milp_problem.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include "absl/strings/str_cat.h"

namespace evac {
namespace {

bool IsValidName(const std::string& name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(),
                      [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

std::string_view RowSenseSymbol(RowSense sense) {
  switch (sense) {
    case RowSense::kLessEqual:
      return "<=";
    case RowSense::kGreaterEqual:
      return ">=";
    case RowSense::kEqual:
      return "=";
  }
  return "?";
}

absl::Status ValidateProblem(const MilpProblem& problem) {
  std::unordered_set<std::string> names;
  for (const Variable& v : problem.variables) {
    if (!IsValidName(v.name)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad variable name '", v.name, "'"));
    }
    if (!names.insert(v.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate variable name ", v.name));
    }
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
        v.lower == std::numeric_limits<double>::infinity() ||
        v.upper == -std::numeric_limits<double>::infinity()) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad bounds on ", v.name));
    }
    if (!std::isfinite(v.objective)) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-finite objective coefficient on ", v.name));
    }
    if (v.type == VarType::kBinary && (v.lower < 0.0 || v.upper > 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("binary variable ", v.name, " outside [0, 1]"));
    }
  }
  names.clear();
  for (const Row& row : problem.rows) {
    if (!IsValidName(row.name)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad row name '", row.name, "'"));
    }
    if (!names.insert(row.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate row name ", row.name));
    }
    if (!std::isfinite(row.rhs)) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-finite right-hand side in ", row.name));
    }
    for (const Term& term : row.terms) {
      if (term.var < 0 || term.var >= problem.num_variables()) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", row.name, " references unknown variable ",
                         term.var));
      }
      if (!std::isfinite(term.coef)) {
        return absl::InvalidArgumentError(
            absl::StrCat("non-finite coefficient in ", row.name));
      }
    }
  }
  return absl::OkStatus();
}

double ObjectiveValue(const MilpProblem& problem,
                      std::span<const double> values) {
  double total = 0.0;
  for (int j = 0; j < problem.num_variables(); ++j) {
    total += problem.variables[j].objective * values[j];
  }
  return total;
}

double RowActivity(const Row& row, std::span<const double> values) {
  double total = 0.0;
  for (const Term& term : row.terms) total += term.coef * values[term.var];
  return total;
}

double MaxViolation(const MilpProblem& problem,
                    std::span<const double> values) {
  double worst = 0.0;
  for (int j = 0; j < problem.num_variables(); ++j) {
    const Variable& v = problem.variables[j];
    worst = std::max({worst, v.lower - values[j], values[j] - v.upper});
  }
  for (const Row& row : problem.rows) {
    const double activity = RowActivity(row, values);
    switch (row.sense) {
      case RowSense::kLessEqual:
        worst = std::max(worst, activity - row.rhs);
        break;
      case RowSense::kGreaterEqual:
        worst = std::max(worst, row.rhs - activity);
        break;
      case RowSense::kEqual:
        worst = std::max(worst, std::abs(activity - row.rhs));
        break;
    }
  }
  return worst;
}

double MaxIntegrality(const MilpProblem& problem,
                      std::span<const double> values) {
  double worst = 0.0;
  for (int j = 0; j < problem.num_variables(); ++j) {
    if (!problem.variables[j].is_integer()) continue;
    worst = std::max(worst, std::abs(values[j] - std::round(values[j])));
  }
  return worst;
}

}  // namespace evac

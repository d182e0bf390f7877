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

// Solver-agnostic mixed-integer linear program: a variable table, sparse
// rows and a minimization objective.

#ifndef EVAC_MILP_PROBLEM_H_
#define EVAC_MILP_PROBLEM_H_

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"

namespace evac {

enum class VarType { kContinuous, kBinary, kInteger };
enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

std::string_view RowSenseSymbol(RowSense sense);

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  VarType type = VarType::kContinuous;
  double objective = 0.0;

  bool is_integer() const { return type != VarType::kContinuous; }
};

struct Row {
  std::string name;
  RowSense sense = RowSense::kLessEqual;
  std::vector<Term> terms;
  double rhs = 0.0;
};

struct MilpMetadata {
  std::string instance;
  std::string mode;
};

struct MilpProblem {
  std::string name;
  MilpMetadata metadata;
  std::vector<Variable> variables;
  std::vector<Row> rows;

  int num_variables() const { return static_cast<int>(variables.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int AddVariable(Variable variable) {
    variables.push_back(std::move(variable));
    return num_variables() - 1;
  }
  int AddRow(Row row) {
    rows.push_back(std::move(row));
    return num_rows() - 1;
  }
};

// Unique whitespace-free names, valid term references, binary bounds in
// [0, 1], finite coefficients and right-hand sides, lower <= upper.
absl::Status ValidateProblem(const MilpProblem& problem);

double ObjectiveValue(const MilpProblem& problem,
                      std::span<const double> values);
double RowActivity(const Row& row, std::span<const double> values);

// Largest absolute violation over rows and variable bounds.
double MaxViolation(const MilpProblem& problem,
                    std::span<const double> values);

// Largest distance to the nearest integer over integer variables.
double MaxIntegrality(const MilpProblem& problem,
                      std::span<const double> values);

}  // namespace evac

#endif  // EVAC_MILP_PROBLEM_H_

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

#include "evac/linearizer.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"

namespace evac {

std::string_view LinearizationModeName(LinearizationMode mode) {
  return mode == LinearizationMode::kExact ? "exact" : "paper-verbatim";
}

absl::StatusOr<LinearizationMode> ParseLinearizationMode(
    std::string_view name) {
  if (name == "exact") return LinearizationMode::kExact;
  if (name == "paper-verbatim") return LinearizationMode::kPaperVerbatim;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown linearization mode '", std::string(name),
      "' (expected exact or paper-verbatim)"));
}

bool ProductRow::Holds(double x, double y, double w, double tolerance) const {
  const double lhs = coef_x * x + coef_y * y + coef_w * w;
  switch (sense) {
    case RowSense::kLessEqual:
      return lhs <= rhs + tolerance;
    case RowSense::kGreaterEqual:
      return lhs >= rhs - tolerance;
    case RowSense::kEqual:
      return std::abs(lhs - rhs) <= tolerance;
  }
  return false;
}

absl::StatusOr<std::vector<ProductRow>> LinearizeProduct(
    double upper, LinearizationMode mode) {
  if (!(upper > 0.0) || !std::isfinite(upper)) {
    return absl::InvalidArgumentError(
        absl::StrCat("product bound must be positive and finite, got ", upper));
  }
  if (mode == LinearizationMode::kExact) {
    return std::vector<ProductRow>{
        {0.0, -upper, 1.0, RowSense::kLessEqual, 0.0},
        {-1.0, 0.0, 1.0, RowSense::kLessEqual, 0.0},
        {-1.0, -upper, 1.0, RowSense::kGreaterEqual, -upper},
        {0.0, 0.0, 1.0, RowSense::kGreaterEqual, 0.0},
    };
  }
  return std::vector<ProductRow>{
      {0.0, -1.0, 1.0, RowSense::kGreaterEqual, -1.0},
      {0.0, -upper, 1.0, RowSense::kLessEqual, 0.0},
      {0.0, 0.0, 1.0, RowSense::kGreaterEqual, 0.0},
      {0.0, 0.0, 1.0, RowSense::kLessEqual, upper},
  };
}

absl::StatusOr<MilpProblem> LinearizeModel(const MibpModel& mibp,
                                           const EvacuationInstance& instance,
                                           LinearizationMode mode) {
  absl::StatusOr<Network> created = Network::Create(instance);
  if (!created.ok()) return created.status();
  const Network& net = *created;
  if (net.num_nodes() != mibp.network.num_nodes() ||
      net.num_arcs() != mibp.network.num_arcs() ||
      net.num_buses() != mibp.network.num_buses() ||
      net.num_trips() != mibp.network.num_trips()) {
    return absl::InvalidArgumentError(
        "bilinear model was built from a different instance");
  }
  absl::StatusOr<int> width = BitWidth(net.capacity());
  if (!width.ok()) return width.status();

  const VariableSpace vs(net, /*with_bits=*/true);
  const TimeUpperBound time_bound(net);
  const double q = static_cast<double>(net.capacity());

  MilpProblem milp;
  milp.name = net.name().empty() ? "evacuation" : net.name();
  milp.metadata = {net.name(), std::string(LinearizationModeName(mode))};
  milp.variables.resize(vs.size());
  for (int p = 0; p < vs.size(); ++p) {
    Variable& var = milp.variables[p];
    var.name = vs.Name(p);
    const VariableKey key = vs.Key(p);
    switch (key.kind) {
      case VarKind::kX:
        var.type = VarType::kBinary;
        var.upper = 1.0;
        break;
      case VarKind::kT:
        var.upper = time_bound.at(key.node, key.bus, key.trip);
        break;
      case VarKind::kB:
        var.type = VarType::kInteger;
        var.upper = q;
        break;
      case VarKind::kY:
        var.type = VarType::kBinary;
        var.upper = 1.0;
        break;
      case VarKind::kV:
        var.upper = std::ldexp(time_bound.at(key.node, key.bus, key.trip),
                               key.bit);
        break;
    }
  }
  for (const Term& term : mibp.objective) {
    milp.variables[term.var].objective += term.coef;
  }

  for (const ConstraintRecord& c : mibp.constraints) {
    if (c.domain != Domain::kNone) continue;
    Row row{c.name, c.sense, c.linear, c.rhs};
    if (c.equation == Equation::kEq1) {
      if (!std::isfinite(c.rhs)) continue;
      // sum_t eta_i T_i b_i  ->  sum_t eta_i sum_n v_n.
      for (const BilinearTerm& term : c.bilinear) {
        const VariableKey tk = mibp.space.Key(term.left);
        for (int n = 0; n < *width; ++n) {
          row.terms.push_back(
              {vs.V(tk.node, tk.bus, tk.trip, n), term.coef});
        }
      }
    }
    milp.AddRow(std::move(row));
  }

  for (int s = net.first_pickup(); s < net.num_nodes(); ++s) {
    for (int m = 0; m < net.num_buses(); ++m) {
      for (int t = 0; t < net.num_trips(); ++t) {
        const std::string sub =
            absl::StrCat(net.node_id(s), "_m", m + 1, "_t", t + 1);
        Row link{absl::StrCat("bits_", sub), RowSense::kEqual,
                 {{vs.B(s, m, t), 1.0}}, 0.0};
        for (int n = 0; n < *width; ++n) {
          link.terms.push_back({vs.Y(s, m, t, n), -std::ldexp(1.0, n)});
        }
        milp.AddRow(std::move(link));

        for (int n = 0; n < *width; ++n) {
          const double scale = std::ldexp(1.0, n);
          const double upper = scale * time_bound.at(s, m, t);
          absl::StatusOr<std::vector<ProductRow>> rows =
              LinearizeProduct(upper, mode);
          if (!rows.ok()) return rows.status();
          const int w = vs.V(s, m, t, n);
          const int y = vs.Y(s, m, t, n);
          const int x = vs.T(s, m, t);
          int k = 0;
          for (const ProductRow& pr : *rows) {
            ++k;
            if (pr.coef_x == 0.0 && pr.coef_y == 0.0) {
              Variable& var = milp.variables[w];
              const double bound = pr.rhs / pr.coef_w;
              if (pr.sense != RowSense::kLessEqual) {
                var.lower = std::max(var.lower, bound);
              }
              if (pr.sense != RowSense::kGreaterEqual) {
                var.upper = std::min(var.upper, bound);
              }
              continue;
            }
            Row row{absl::StrCat("prod", k, "_", n, "_", sub), pr.sense, {},
                    pr.rhs};
            row.terms.push_back({w, pr.coef_w});
            if (pr.coef_x != 0.0) row.terms.push_back({x, pr.coef_x * scale});
            if (pr.coef_y != 0.0) row.terms.push_back({y, pr.coef_y});
            milp.AddRow(std::move(row));
          }
        }
      }
    }
  }
  return milp;
}

absl::StatusOr<double> ProductResidual(const Network& network,
                                       const EvacuationPlan& plan) {
  const VariableSpace vs(network, /*with_bits=*/true);
  if (static_cast<int>(plan.values.size()) != vs.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "plan has ", plan.values.size(), " values, expected ", vs.size(),
        " with bit variables"));
  }
  const std::vector<double>& val = plan.values;
  double worst = 0.0;
  for (int s = network.first_pickup(); s < network.num_nodes(); ++s) {
    for (int m = 0; m < network.num_buses(); ++m) {
      for (int t = 0; t < network.num_trips(); ++t) {
        double decoded = 0.0;
        for (int n = 0; n < vs.bit_width(); ++n) {
          const double scale = std::ldexp(1.0, n);
          const double y = val[vs.Y(s, m, t, n)];
          decoded += scale * y;
          worst = std::max(worst, std::abs(val[vs.V(s, m, t, n)] -
                                           scale * val[vs.T(s, m, t)] * y));
        }
        worst = std::max(worst, std::abs(val[vs.B(s, m, t)] - decoded));
      }
    }
  }
  return worst;
}

absl::StatusOr<EvacuationPlan> ExpandPlanBits(const Network& network,
                                              const EvacuationPlan& plan) {
  const VariableSpace bitless(network, /*with_bits=*/false);
  const VariableSpace vs(network, /*with_bits=*/true);
  if (static_cast<int>(plan.values.size()) != bitless.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "plan has ", plan.values.size(), " values, expected ", bitless.size(),
        " without bit variables"));
  }
  EvacuationPlan out{plan.instance, plan.mode, plan.values};
  out.values.resize(vs.size(), 0.0);
  for (int s = network.first_pickup(); s < network.num_nodes(); ++s) {
    for (int m = 0; m < network.num_buses(); ++m) {
      for (int t = 0; t < network.num_trips(); ++t) {
        const double b = plan.values[vs.B(s, m, t)];
        const double rounded = std::round(b);
        if (rounded != b || b < 0.0 ||
            b > static_cast<double>(network.capacity())) {
          return absl::InvalidArgumentError(
              absl::StrCat("load ", vs.Name(vs.B(s, m, t)), " = ", b,
                           " is not an integer in [0, Q]"));
        }
        absl::StatusOr<std::vector<int>> bits =
            EncodeBits(static_cast<int64_t>(rounded), vs.bit_width());
        if (!bits.ok()) return bits.status();
        const double time = plan.values[vs.T(s, m, t)];
        for (int n = 0; n < vs.bit_width(); ++n) {
          out.values[vs.Y(s, m, t, n)] = (*bits)[n];
          out.values[vs.V(s, m, t, n)] = std::ldexp(time, n) * (*bits)[n];
        }
      }
    }
  }
  return out;
}

}  // namespace evac

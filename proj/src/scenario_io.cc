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

#include "evac/scenario_io.h"

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "evac/text_format.h"

namespace evac {
namespace {

// Uniform double in [0, 1) from the top 53 bits, identical on every
// standard library.
class Sampler {
 public:
  explicit Sampler(uint64_t seed) : engine_(seed) {}

  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Unit(); }
  int64_t UniformInt(int64_t lo, int64_t hi) {
    const auto span = static_cast<double>(hi - lo + 1);
    const auto k = static_cast<int64_t>(Unit() * span);
    return lo + std::min<int64_t>(k, hi - lo);
  }

 private:
  std::mt19937_64 engine_;
};

// Dividing by an exact power of ten yields the double nearest the decimal.
double RoundDecimals(double value, int digits) {
  const double scale = std::pow(10.0, digits);
  return std::round(value * scale) / scale;
}

std::string Padded(absl::string_view prefix, int index, int count) {
  const int width = std::max<int>(2, std::to_string(count).size());
  std::string digits = std::to_string(index);
  return absl::StrCat(prefix, std::string(width - digits.size(), '0'), digits);
}

std::string_view Std(absl::string_view s) { return {s.data(), s.size()}; }

enum class Section { kNone, kNodes, kArcs, kParams, kDemand, kBuses, kDone };

std::optional<Section> SectionKeyword(absl::string_view word) {
  if (word == "NODES") return Section::kNodes;
  if (word == "ARCS") return Section::kArcs;
  if (word == "PARAMS") return Section::kParams;
  if (word == "DEMAND") return Section::kDemand;
  if (word == "BUSES") return Section::kBuses;
  return std::nullopt;
}

const char* SectionName(Section s) {
  switch (s) {
    case Section::kNodes:
      return "NODES";
    case Section::kArcs:
      return "ARCS";
    case Section::kParams:
      return "PARAMS";
    case Section::kDemand:
      return "DEMAND";
    case Section::kBuses:
      return "BUSES";
    default:
      return "";
  }
}

absl::Status SchemaError(int line, absl::string_view field,
                         absl::string_view message) {
  return absl::InvalidArgumentError(
      absl::StrCat("line ", line, ": ", field, ": ", message));
}

absl::Status SchemaError(absl::string_view field, absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat(field, ": ", message));
}

}  // namespace

absl::Status ValidateGeneratorConfig(const GeneratorConfig& c) {
  std::vector<std::string> errors;
  auto require = [&errors](bool ok, absl::string_view what) {
    if (!ok) errors.emplace_back(what);
  };
  require(!c.name.empty() &&
              std::none_of(c.name.begin(), c.name.end(),
                           [](unsigned char ch) {
                             return std::isspace(ch) || ch == '#';
                           }),
          "name must be non-empty without whitespace or '#'");
  require(c.depots >= 1, "depots must be at least 1");
  require(c.pickups >= 1, "pickups must be at least 1");
  require(c.shelters >= 1, "shelters must be at least 1");
  require(c.buses >= 1, "buses must be at least 1");
  require(c.capacity >= 1, "capacity must be at least 1");
  require(c.trips >= 1, "trips must be at least 1");
  require(c.demand_min >= 0 && c.demand_min <= c.demand_max,
          "demand range must satisfy 0 <= demand_min <= demand_max");
  require(c.travel_min > 0 && c.travel_min <= c.travel_max &&
              std::isfinite(c.travel_max),
          "travel range must satisfy 0 < travel_min <= travel_max < inf");
  require(c.tau_min >= 0 && c.tau_min <= c.tau_max && std::isfinite(c.tau_max),
          "tau range must satisfy 0 <= tau_min <= tau_max < inf");
  require(c.eta_min >= 0 && c.eta_min <= c.eta_max && std::isfinite(c.eta_max),
          "eta range must satisfy 0 <= eta_min <= eta_max < inf");
  require(c.dose_limit >= 0, "dose_limit must be nonnegative");
  if (errors.empty()) return absl::OkStatus();
  return absl::InvalidArgumentError(
      absl::StrCat("invalid generator config: ", absl::StrJoin(errors, "; ")));
}

absl::StatusOr<EvacuationInstance> Generate(const GeneratorConfig& config) {
  absl::Status valid = ValidateGeneratorConfig(config);
  if (!valid.ok()) return valid;
  Sampler rng(config.seed);
  EvacuationInstance inst;
  inst.name = config.name;
  for (int k = 1; k <= config.depots; ++k) {
    inst.depots.push_back(absl::StrCat("d", k));
  }
  for (int k = 1; k <= config.pickups; ++k) {
    inst.pickups.push_back(Padded("p", k, config.pickups));
  }
  for (int k = 1; k <= config.shelters; ++k) {
    inst.shelters.push_back(Padded("s", k, config.shelters));
  }
  auto travel = [&] {
    return std::max(0.01, RoundDecimals(rng.Uniform(config.travel_min,
                                              config.travel_max), 2));
  };
  auto tau = [&] {
    return RoundDecimals(rng.Uniform(config.tau_min, config.tau_max), 7);
  };
  int64_t total = 0;
  for (const std::string& p : inst.pickups) {
    inst.node_radiation[p] =
        RoundDecimals(rng.Uniform(config.eta_min, config.eta_max), 7);
    inst.demand[p] = rng.UniformInt(config.demand_min, config.demand_max);
    total += inst.demand[p];
  }
  for (const std::string& d : inst.depots) {
    for (const std::string& p : inst.pickups) {
      inst.arcs.push_back({d, p, travel(), tau()});
    }
  }
  for (const std::string& p : inst.pickups) {
    for (const std::string& s : inst.shelters) {
      const double t = travel();
      const double r = tau();
      inst.arcs.push_back({p, s, t, r});
      inst.arcs.push_back({s, p, t, r});
    }
  }
  // Every trip serves one pickup, so the fleet has this many pickup visits.
  const int64_t q = config.capacity;
  const int64_t visits = static_cast<int64_t>(config.buses) * (config.trips / 2);
  if (total > visits * q) {
    for (auto& [p, d] : inst.demand) d = d * visits * q / total;
  }
  auto needed = [&] {
    int64_t n = 0;
    for (const auto& [p, d] : inst.demand) n += (d + q - 1) / q;
    return n;
  };
  // Trim the smallest partial load until the visits fit.
  while (needed() > visits) {
    int64_t* trim = nullptr;
    for (auto& [p, d] : inst.demand) {
      if (d % q != 0 && (trim == nullptr || d % q < *trim % q)) trim = &d;
    }
    if (trim == nullptr) {
      return absl::InternalError("generated demand exceeds the fleet visits");
    }
    *trim -= *trim % q;
  }
  inst.dose_limit = config.dose_limit;
  inst.capacity = config.capacity;
  inst.trips = config.trips;
  for (int k = 1; k <= config.buses; ++k) {
    inst.buses.push_back({Padded("v", k, config.buses),
                          inst.depots[(k - 1) % config.depots]});
  }
  return inst;
}

absl::StatusOr<GeneratorConfig> ParseGeneratorConfig(std::string_view input) {
  const absl::string_view text(input.data(), input.size());
  GeneratorConfig c;
  std::set<std::string> seen;
  int line_number = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_number;
    absl::string_view line = raw.substr(0, raw.find('#'));
    std::vector<absl::string_view> tokens =
        absl::StrSplit(line, absl::ByAnyChar(" \t\r"), absl::SkipEmpty());
    if (tokens.empty()) continue;
    if (tokens.size() != 2) {
      return SchemaError(line_number, "config", "expected '<key> <value>'");
    }
    const std::string key(tokens[0]);
    const std::string_view value = Std(tokens[1]);
    if (!seen.insert(key).second) {
      return SchemaError(line_number, key, "listed twice");
    }
    auto set_int = [&](auto& field) -> absl::Status {
      std::optional<int64_t> v = ParseInt(value);
      if (!v) return SchemaError(line_number, key, "expected an integer");
      field = static_cast<std::remove_reference_t<decltype(field)>>(*v);
      return absl::OkStatus();
    };
    auto set_double = [&](double& field) -> absl::Status {
      std::optional<double> v = ParseDouble(value, key == "dose_limit");
      if (!v) return SchemaError(line_number, key, "expected a number");
      field = *v;
      return absl::OkStatus();
    };
    absl::Status s;
    if (key == "name") {
      c.name = std::string(value);
    } else if (key == "depots") {
      s = set_int(c.depots);
    } else if (key == "pickups") {
      s = set_int(c.pickups);
    } else if (key == "shelters") {
      s = set_int(c.shelters);
    } else if (key == "buses") {
      s = set_int(c.buses);
    } else if (key == "capacity") {
      s = set_int(c.capacity);
    } else if (key == "trips") {
      s = set_int(c.trips);
    } else if (key == "demand_min") {
      s = set_int(c.demand_min);
    } else if (key == "demand_max") {
      s = set_int(c.demand_max);
    } else if (key == "seed") {
      std::optional<int64_t> v = ParseInt(value);
      if (!v || *v < 0) {
        return SchemaError(line_number, key, "expected a nonnegative integer");
      }
      c.seed = static_cast<uint64_t>(*v);
    } else if (key == "travel_min") {
      s = set_double(c.travel_min);
    } else if (key == "travel_max") {
      s = set_double(c.travel_max);
    } else if (key == "tau_min") {
      s = set_double(c.tau_min);
    } else if (key == "tau_max") {
      s = set_double(c.tau_max);
    } else if (key == "eta_min") {
      s = set_double(c.eta_min);
    } else if (key == "eta_max") {
      s = set_double(c.eta_max);
    } else if (key == "dose_limit") {
      s = set_double(c.dose_limit);
    } else {
      return SchemaError(line_number, key, "unknown key");
    }
    if (!s.ok()) return s;
  }
  absl::Status valid = ValidateGeneratorConfig(c);
  if (!valid.ok()) return valid;
  return c;
}

std::string SaveInstance(const EvacuationInstance& inst) {
  std::string out = absl::StrCat("NAME ", inst.name, "\nNODES\n");
  for (const std::string& d : inst.depots) {
    absl::StrAppend(&out, "  ", d, " depot\n");
  }
  for (const std::string& p : inst.pickups) {
    auto it = inst.node_radiation.find(p);
    absl::StrAppend(&out, "  ", p, " pickup ",
                    FormatNumber(it == inst.node_radiation.end() ? 0.0
                                                                 : it->second),
                    "\n");
  }
  for (const std::string& s : inst.shelters) {
    absl::StrAppend(&out, "  ", s, " shelter\n");
  }
  out += "ARCS\n";
  for (const Arc& a : inst.arcs) {
    absl::StrAppend(&out, "  ", a.from, " ", a.to, " ",
                    FormatNumber(a.travel_time), " ",
                    FormatNumber(a.radiation), "\n");
  }
  absl::StrAppend(&out, "PARAMS\n  Q ", inst.capacity, "\n  T ", inst.trips,
                  "\n  dose_limit ", FormatNumber(inst.dose_limit),
                  "\nDEMAND\n");
  for (const std::string& p : inst.pickups) {
    auto it = inst.demand.find(p);
    absl::StrAppend(&out, "  ", p, " ",
                    it == inst.demand.end() ? 0 : it->second, "\n");
  }
  out += "BUSES\n";
  for (const Bus& b : inst.buses) {
    absl::StrAppend(&out, "  ", b.id, " ", b.depot, "\n");
  }
  out += "END\n";
  return out;
}

absl::StatusOr<EvacuationInstance> LoadInstance(std::string_view input) {
  const absl::string_view text(input.data(), input.size());
  EvacuationInstance inst;
  Section section = Section::kNone;
  std::set<Section> seen_sections;
  bool seen_name = false;
  std::map<std::string, NodeKind> kinds;
  std::map<std::string, int> arc_lines;
  std::map<std::string, int> demand_lines;
  std::map<std::string, int> bus_lines;
  std::optional<int64_t> q;
  std::optional<int64_t> trips;
  std::optional<double> dose;
  int counter = 0;
  int line_number = 0;

  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_number;
    absl::string_view line = raw.substr(0, raw.find('#'));
    std::vector<absl::string_view> tok =
        absl::StrSplit(line, absl::ByAnyChar(" \t\r"), absl::SkipEmpty());
    if (tok.empty()) continue;
    if (section == Section::kDone) {
      return SchemaError(line_number, "END", "content after END");
    }
    if (tok[0] == "NAME") {
      if (tok.size() != 2) {
        return SchemaError(line_number, "NAME", "expected 'NAME <id>'");
      }
      if (seen_name) return SchemaError(line_number, "NAME", "listed twice");
      seen_name = true;
      inst.name = std::string(tok[1]);
      section = Section::kNone;
      continue;
    }
    if (tok.size() == 1 && tok[0] == "END") {
      section = Section::kDone;
      continue;
    }
    if (tok.size() == 1) {
      if (std::optional<Section> s = SectionKeyword(tok[0])) {
        if (!seen_sections.insert(*s).second) {
          return SchemaError(line_number, tok[0], "section listed twice");
        }
        section = *s;
        counter = 0;
        continue;
      }
    }
    ++counter;
    const std::string where = absl::StrCat(SectionName(section), "[", counter,
                                           "]");
    switch (section) {
      case Section::kNone:
      case Section::kDone:
        return SchemaError(line_number, tok[0], "line outside any section");
      case Section::kNodes: {
        const std::string id(tok[0]);
        if (tok.size() < 2) {
          return SchemaError(line_number, where, "expected '<id> <kind>'");
        }
        if (kinds.contains(id)) {
          return SchemaError(line_number, where,
                             absl::StrCat("node '", id, "' declared twice"));
        }
        if (tok[1] == "depot" || tok[1] == "shelter") {
          if (tok.size() != 2) {
            return SchemaError(line_number, where,
                               "only pickups carry a radiation rate");
          }
          const bool depot = tok[1] == "depot";
          kinds[id] = depot ? NodeKind::kDepot : NodeKind::kShelter;
          (depot ? inst.depots : inst.shelters).push_back(id);
        } else if (tok[1] == "pickup") {
          if (tok.size() != 3) {
            return SchemaError(line_number, absl::StrCat(where, ".eta"),
                               "pickup needs a radiation rate");
          }
          std::optional<double> eta = ParseDouble(Std(tok[2]));
          if (!eta) {
            return SchemaError(line_number, absl::StrCat(where, ".eta"),
                               "expected a finite number");
          }
          kinds[id] = NodeKind::kPickup;
          inst.pickups.push_back(id);
          inst.node_radiation[id] = *eta;
        } else {
          return SchemaError(line_number, absl::StrCat(where, ".kind"),
                             "expected depot, pickup or shelter");
        }
        break;
      }
      case Section::kArcs: {
        if (tok.size() != 4) {
          return SchemaError(line_number, where,
                             "expected '<from> <to> <travel_s> <tau>'");
        }
        std::optional<double> travel = ParseDouble(Std(tok[2]));
        std::optional<double> tau = ParseDouble(Std(tok[3]));
        if (!travel) {
          return SchemaError(line_number, absl::StrCat(where, ".travel_s"),
                             "expected a finite number");
        }
        if (!tau) {
          return SchemaError(line_number, absl::StrCat(where, ".tau"),
                             "expected a finite number");
        }
        inst.arcs.push_back(
            {std::string(tok[0]), std::string(tok[1]), *travel, *tau});
        arc_lines[absl::StrCat(inst.arcs.size() - 1)] = line_number;
        break;
      }
      case Section::kParams: {
        if (tok.size() != 2) {
          return SchemaError(line_number, where, "expected '<key> <value>'");
        }
        const std::string field = absl::StrCat("PARAMS.", tok[0]);
        if (tok[0] == "Q" || tok[0] == "T") {
          std::optional<int64_t> v = ParseInt(Std(tok[1]));
          if (!v) return SchemaError(line_number, field, "expected an integer");
          std::optional<int64_t>& slot = tok[0] == "Q" ? q : trips;
          if (slot) return SchemaError(line_number, field, "listed twice");
          slot = *v;
        } else if (tok[0] == "dose_limit") {
          std::optional<double> v = ParseDouble(Std(tok[1]), true);
          if (!v) return SchemaError(line_number, field, "expected a number");
          if (dose) return SchemaError(line_number, field, "listed twice");
          dose = *v;
        } else {
          return SchemaError(line_number, field, "unknown parameter");
        }
        break;
      }
      case Section::kDemand: {
        if (tok.size() != 2) {
          return SchemaError(line_number, where, "expected '<node> <count>'");
        }
        std::optional<int64_t> count = ParseInt(Std(tok[1]));
        const std::string id(tok[0]);
        if (!count) {
          return SchemaError(line_number, absl::StrCat("DEMAND.", id),
                             "expected an integer");
        }
        if (demand_lines.contains(id)) {
          return SchemaError(line_number, absl::StrCat("DEMAND.", id),
                             "listed twice");
        }
        demand_lines[id] = line_number;
        inst.demand[id] = *count;
        break;
      }
      case Section::kBuses: {
        if (tok.size() != 2) {
          return SchemaError(line_number, where, "expected '<id> <depot>'");
        }
        bus_lines[std::string(tok[0])] = line_number;
        inst.buses.push_back({std::string(tok[0]), std::string(tok[1])});
        break;
      }
    }
  }

  if (!seen_name) return SchemaError("NAME", "missing");
  for (Section s : {Section::kNodes, Section::kArcs, Section::kParams,
                    Section::kDemand, Section::kBuses}) {
    if (!seen_sections.contains(s)) {
      return SchemaError(SectionName(s), "section missing");
    }
  }
  if (section != Section::kDone) return SchemaError("END", "missing");
  if (!q) return SchemaError("PARAMS.Q", "missing");
  if (!trips) return SchemaError("PARAMS.T", "missing");
  if (!dose) return SchemaError("PARAMS.dose_limit", "missing");
  inst.capacity = *q;
  if (*trips < 1 || *trips > 1'000'000) {
    return SchemaError("PARAMS.T", "must be between 1 and 1000000");
  }
  inst.trips = static_cast<int>(*trips);
  inst.dose_limit = *dose;

  for (size_t k = 0; k < inst.arcs.size(); ++k) {
    const Arc& a = inst.arcs[k];
    const int line = arc_lines[absl::StrCat(k)];
    if (!kinds.contains(a.from)) {
      return SchemaError(line, absl::StrCat("ARCS[", k + 1, "].from"),
                         absl::StrCat("unknown node '", a.from, "'"));
    }
    if (!kinds.contains(a.to)) {
      return SchemaError(line, absl::StrCat("ARCS[", k + 1, "].to"),
                         absl::StrCat("unknown node '", a.to, "'"));
    }
  }
  for (const auto& [id, line] : demand_lines) {
    if (!kinds.contains(id)) {
      return SchemaError(line, absl::StrCat("DEMAND.", id), "unknown node");
    }
  }
  for (const std::string& p : inst.pickups) {
    if (!demand_lines.contains(p)) {
      return SchemaError(absl::StrCat("DEMAND.", p), "missing");
    }
  }
  for (const Bus& b : inst.buses) {
    if (!kinds.contains(b.depot)) {
      return SchemaError(bus_lines[b.id], absl::StrCat("BUSES.", b.id),
                         absl::StrCat("unknown node '", b.depot, "'"));
    }
  }
  const std::vector<InstanceViolation> violations = ValidateInstance(inst);
  if (!violations.empty()) {
    std::vector<std::string> lines;
    for (const InstanceViolation& v : violations) {
      lines.push_back(absl::StrCat(v.field, ": ", v.rule));
    }
    return absl::InvalidArgumentError(
        absl::StrCat("invalid instance: ", absl::StrJoin(lines, "; ")));
  }
  return inst;
}

}  // namespace evac

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


// evacplan: generate, solve, validate, export and report bus evacuation
// plans.
//
// Exit codes: 0 success or feasible plan, 1 usage or I/O error, 2 infeasible
// instance or invalid plan, 3 time limit reached without an incumbent.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "evac/brute_force.h"
#include "evac/core_model.h"
#include "evac/evacuation_solver.h"
#include "evac/formulation.h"
#include "evac/linearizer.h"
#include "evac/mps.h"
#include "evac/plan_io.h"
#include "evac/scenario_io.h"
#include "evac/text_format.h"

namespace evac {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNoIncumbent = 3;

class ExitError {
 public:
  ExitError(int code, std::string message)
      : code_(code), message_(std::move(message)) {}
  int code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  int code_;
  std::string message_;
};

[[noreturn]] void Fail(int code, const std::string& message) {
  throw ExitError(code, message);
}

int CodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kResourceExhausted:
      return kExitInvalid;
    default:
      return kExitUsage;
  }
}

template <typename T>
T Unwrap(absl::StatusOr<T> value, const std::string& context) {
  if (!value.ok()) {
    Fail(CodeFor(value.status()),
         absl::StrCat(context, ": ", value.status().message()));
  }
  return *std::move(value);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(kExitUsage, absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(kExitUsage, absl::StrCat("cannot write ", path));
  out << contents;
  if (!out.flush()) Fail(kExitUsage, absl::StrCat("cannot write ", path));
}

EvacuationInstance LoadInstanceFile(const std::string& path) {
  return Unwrap(LoadInstance(ReadFile(path)), path);
}

std::string FormatFixed(double value) { return absl::StrFormat("%.2f", value); }

void PrintResultTable(const std::string& instance, const SolveStats& stats,
                      const std::string& t_evac, const std::string& cost) {
  const std::vector<std::string> head = {"Instance", "Optimality Gap",
                                         "Elapsed Time (s)", "T_evac", "Cost"};
  const std::vector<std::string> row = {instance, FormatGap(stats.gap),
                                        FormatFixed(stats.wall_seconds),
                                        t_evac, cost};
  std::vector<size_t> width(head.size());
  for (size_t c = 0; c < head.size(); ++c) {
    width[c] = std::max(head[c].size(), row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out = "|";
    for (size_t c = 0; c < cells.size(); ++c) {
      absl::StrAppend(&out, " ", cells[c],
                      std::string(width[c] - cells[c].size(), ' '), " |");
    }
    std::cout << out << "\n";
  };
  line(head);
  std::string rule = "|";
  for (size_t w : width) absl::StrAppend(&rule, std::string(w + 2, '-'), "|");
  std::cout << rule << "\n";
  line(row);
}

std::string RenameMap(const MpsDocument& doc) {
  std::string out = "# kind written original\n";
  for (const MpsRename& r : doc.renamed) {
    absl::StrAppend(&out, r.is_row ? "row " : "col ", r.written, " ",
                    r.original, "\n");
  }
  return out;
}

void WriteMps(const MilpProblem& milp, const std::string& path) {
  const MpsDocument doc = ExportMps(milp);
  WriteFile(path, doc.text);
  if (!doc.renamed.empty()) {
    WriteFile(path + ".names", RenameMap(doc));
    std::cerr << doc.renamed.size() << " names shortened; map in " << path
              << ".names\n";
  }
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out;
};

int RunGenerate(const GenerateArgs& args) {
  GeneratorConfig config;
  if (!args.config.empty()) {
    config = Unwrap(ParseGeneratorConfig(ReadFile(args.config)), args.config);
  }
  if (args.seed) config.seed = *args.seed;
  const EvacuationInstance instance =
      Unwrap(Generate(config), "generate");
  WriteFile(args.out, SaveInstance(instance));
  std::cout << "wrote " << args.out << " (" << instance.pickups.size()
            << " pickups, " << instance.shelters.size() << " shelters, "
            << instance.buses.size() << " buses, " << instance.arcs.size()
            << " arcs)\n";
  return kExitOk;
}

// ------------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance;
  std::string mode = "exact";
  double gap = 1e-4;
  double time_limit = 3600.0;
  int workers = 1;
  uint64_t seed = 0;
  int64_t node_limit = 0;
  std::string out;
  std::string mps;
  bool verbose = false;
};

int RunSolve(const SolveArgs& args) {
  const EvacuationInstance instance = LoadInstanceFile(args.instance);
  EvacuationSolveOptions options;
  options.mode = Unwrap(ParseLinearizationMode(args.mode), "--mode");
  options.bnb.gap_tolerance = args.gap;
  options.bnb.time_limit_s = args.time_limit;
  options.bnb.workers = args.workers;
  options.bnb.seed = args.seed;
  options.bnb.node_limit = args.node_limit;
  options.bnb.verbose = args.verbose;
  const EvacuationSolveResult result =
      Unwrap(SolveEvacuation(instance, options), args.instance);

  if (!args.mps.empty()) WriteMps(result.milp, args.mps);

  const bool found = result.plan.has_value();
  PrintResultTable(instance.name, result.stats,
                   found ? FormatFixed(result.evacuation_time) : "-",
                   found ? FormatFixed(result.cost) : "-");
  std::cout << "termination: " << TerminationName(result.stats.termination)
            << "  nodes: " << result.stats.nodes
            << "  lp iterations: " << result.stats.lp_iterations
            << "  bound: " << FormatNumber(result.stats.lower_bound) << "\n";

  if (found && !args.out.empty()) {
    const Network network = Unwrap(Network::Create(instance), args.instance);
    WriteFile(args.out, Unwrap(WritePlan(network, *result.plan), args.out));
  }
  if (found) return kExitOk;
  if (result.stats.termination == Termination::kInfeasible) {
    std::cerr << "instance is infeasible\n";
    return kExitInvalid;
  }
  std::cerr << "no incumbent found before the "
            << TerminationName(result.stats.termination) << " stop\n";
  return kExitNoIncumbent;
}

// ------------------------------------------------------------------ export

struct ExportArgs {
  std::string instance;
  std::string mode = "exact";
  std::string mps;
};

int RunExport(const ExportArgs& args) {
  const EvacuationInstance instance = LoadInstanceFile(args.instance);
  const LinearizationMode mode =
      Unwrap(ParseLinearizationMode(args.mode), "--mode");
  const MibpModel mibp = Unwrap(BuildMibp(instance), args.instance);
  const MilpProblem milp =
      Unwrap(LinearizeModel(mibp, instance, mode), args.instance);
  WriteMps(milp, args.mps);
  std::cout << "wrote " << args.mps << " (" << milp.num_variables()
            << " columns, " << milp.num_rows() << " rows)\n";
  return kExitOk;
}

// ---------------------------------------------------------------- validate

struct PlanArgs {
  std::string instance;
  std::string plan;
  std::string routes_out;
};

int RunValidate(const PlanArgs& args) {
  const EvacuationInstance instance = LoadInstanceFile(args.instance);
  const Network network = Unwrap(Network::Create(instance), args.instance);
  const EvacuationPlan plan =
      Unwrap(ReadPlan(network, ReadFile(args.plan)), args.plan);
  const FeasibilityReport report =
      Unwrap(CheckPlan(instance, plan), args.plan);
  if (report.feasible()) {
    std::cout << "feasible\n";
    return kExitOk;
  }
  std::cout << "infeasible: " << report.violations.size() << " violations\n";
  for (const PlanViolation& v : report.violations) {
    std::cout << "  " << EquationName(v.equation) << " " << v.constraint
              << ": " << FormatNumber(v.lhs) << " "
              << RowSenseSymbol(v.sense) << " " << FormatNumber(v.bound)
              << "\n";
  }
  return kExitInvalid;
}

// ------------------------------------------------------------------ report

int RunReport(const PlanArgs& args) {
  const EvacuationInstance instance = LoadInstanceFile(args.instance);
  const Network network = Unwrap(Network::Create(instance), args.instance);
  const EvacuationPlan plan =
      Unwrap(ReadPlan(network, ReadFile(args.plan)), args.plan);
  const std::vector<BusRoute> routes =
      Unwrap(ExtractRoutes(network, plan), args.plan);
  const std::vector<DoseEntry> doses =
      Unwrap(ComputeDoses(network, plan), args.plan);

  const std::filesystem::path dir(args.routes_out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(kExitUsage, absl::StrCat("cannot create ", args.routes_out));

  double total = 0.0;
  for (const BusRoute& route : routes) {
    std::string out =
        "# trip from to travel depart arrive load_before load_after\n";
    for (const RouteLeg& leg : route.legs) {
      if (leg.idle) {
        absl::StrAppend(&out, leg.trip, " - - 0 - - ",
                        FormatNumber(leg.load_before), " ",
                        FormatNumber(leg.load_after), "\n");
        continue;
      }
      const double travel = leg.arrive - leg.depart;
      total += travel;
      absl::StrAppend(&out, leg.trip, " ", leg.from, " ", leg.to, " ",
                      FormatNumber(travel), " ", FormatNumber(leg.depart),
                      " ", FormatNumber(leg.arrive), " ",
                      FormatNumber(leg.load_before), " ",
                      FormatNumber(leg.load_after), "\n");
    }
    WriteFile((dir / (route.bus + ".route")).string(), out);
  }
  std::string dose_file = "# pickup bus dose\n";
  for (const DoseEntry& d : doses) {
    absl::StrAppend(&dose_file, d.pickup, " ", d.bus, " ",
                    FormatNumber(d.dose), "\n");
  }
  WriteFile((dir / "doses.dat").string(), dose_file);
  std::cout << "wrote " << routes.size() << " route files and doses.dat to "
            << args.routes_out << "\n"
            << "cost " << FormatFixed(total) << "  T_evac "
            << FormatFixed(EvacuationTime(routes)) << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ oracle

struct OracleArgs {
  std::string instance;
  std::string out;
};

int RunOracle(const OracleArgs& args) {
  const EvacuationInstance instance = LoadInstanceFile(args.instance);
  const OracleResult result =
      Unwrap(BruteForceOracle(instance), args.instance);
  if (!result.feasible) {
    std::cout << "infeasible\n";
    return kExitInvalid;
  }
  std::cout << "optimal cost " << FormatNumber(result.objective) << " ("
            << result.bus_options << " routes per bus enumerated)\n";
  if (!args.out.empty()) {
    const Network network = Unwrap(Network::Create(instance), args.instance);
    WriteFile(args.out, Unwrap(WritePlan(network, result.plan), args.out));
  }
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Bus evacuation planning toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "Write a random instance");
  generate->add_option("--config", gen.config, "key value generator config")
      ->check(CLI::ExistingFile);
  generate->add_option("--seed", gen.seed, "Overrides the config seed");
  generate->add_option("--out", gen.out, "Output .evac file")->required();

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("instance", solve_args.instance, ".evac file")
      ->required();
  solve->add_option("--mode", solve_args.mode, "exact or paper-verbatim")
      ->check(CLI::IsMember({"exact", "paper-verbatim"}));
  solve->add_option("--gap", solve_args.gap, "Relative gap tolerance")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--time-limit", solve_args.time_limit, "Seconds");
  solve->add_option("--workers", solve_args.workers, "Search threads")
      ->check(CLI::PositiveNumber);
  solve->add_option("--seed", solve_args.seed, "Heuristic tie-break seed");
  solve->add_option("--node-limit", solve_args.node_limit, "0 for none")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--out", solve_args.out, "Plan file");
  solve->add_option("--mps", solve_args.mps, "MPS export of the MILP");
  solve->add_flag("--verbose", solve_args.verbose, "Progress on stderr");

  ExportArgs export_args;
  CLI::App* exporter = app.add_subcommand("export", "Write the MILP as MPS");
  exporter->add_option("instance", export_args.instance, ".evac file")
      ->required();
  exporter->add_option("--mode", export_args.mode, "exact or paper-verbatim")
      ->check(CLI::IsMember({"exact", "paper-verbatim"}));
  exporter->add_option("--mps", export_args.mps, "Output file")->required();

  PlanArgs validate_args;
  CLI::App* validate = app.add_subcommand("validate", "Check a plan");
  validate->add_option("instance", validate_args.instance, ".evac file")
      ->required();
  validate->add_option("plan", validate_args.plan, "Plan file")->required();

  PlanArgs report_args;
  CLI::App* report =
      app.add_subcommand("report", "Write route and dose data for a plan");
  report->add_option("instance", report_args.instance, ".evac file")
      ->required();
  report->add_option("plan", report_args.plan, "Plan file")->required();
  report->add_option("--routes-out", report_args.routes_out, "Directory")
      ->required();

  OracleArgs oracle_args;
  CLI::App* oracle =
      app.add_subcommand("oracle", "Exhaustive solve of a tiny instance");
  oracle->add_option("instance", oracle_args.instance, ".evac file")
      ->required();
  oracle->add_option("--out", oracle_args.out, "Plan file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return RunGenerate(gen);
    if (*solve) return RunSolve(solve_args);
    if (*exporter) return RunExport(export_args);
    if (*validate) return RunValidate(validate_args);
    if (*report) return RunReport(report_args);
    if (*oracle) return RunOracle(oracle_args);
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.message() << "\n";
    return e.code();
  }
  return kExitUsage;
}

}  // namespace
}  // namespace evac

int main(int argc, char** argv) { return evac::Main(argc, argv); }

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


// Runs the evacplan binary end to end through the shell.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
};

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           absl::StrCat("evacplan_", ::testing::UnitTest::GetInstance()
                                         ->current_test_info()
                                         ->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  Outcome Evacplan(const std::string& args) const {
    const std::string log = Path("stdout.txt");
    const std::string cmd = absl::StrCat("'", EVACPLAN_BINARY, "' ", args,
                                         " > '", log, "' 2> '",
                                         Path("stderr.txt"), "'");
    const int status = std::system(cmd.c_str());
    Outcome run;
    run.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    run.out = Slurp(log);
    return run;
  }

  // A small generated instance: 2 pickups, 1 shelter, 2 buses.
  std::string SmallInstance(int seed) const {
    const std::string config = Path("small.cfg");
    std::ofstream(config) << "# two pickups\n"
                             "pickups 2\nshelters 1\nbuses 2\ncapacity 10\n"
                             "trips 4\ndemand_min 5\ndemand_max 15\n";
    const std::string out = Path(absl::StrCat("small", seed, ".evac"));
    const Outcome run = Evacplan(absl::StrCat("generate --config ", config,
                                          " --seed ", seed, " --out ", out));
    EXPECT_EQ(run.code, 0) << run.out;
    return out;
  }

  fs::path dir_;
};

const std::string kT1 = absl::StrCat(EVAC_TEST_DATA_DIR, "/T1.evac");

// The row of the result table, split into trimmed cells.
std::vector<std::string> TableRow(const std::string& out) {
  std::vector<std::string> lines = absl::StrSplit(out, '\n');
  if (lines.size() < 3) return {};
  std::vector<std::string> cells;
  for (absl::string_view cell : absl::StrSplit(lines[2], '|')) {
    std::string c(cell);
    c.erase(0, c.find_first_not_of(' '));
    c.erase(c.find_last_not_of(' ') + 1);
    cells.push_back(c);
  }
  // Leading and trailing empties from the outer bars.
  if (cells.size() >= 2) cells = {cells.begin() + 1, cells.end() - 1};
  return cells;
}

TEST_F(CliTest, SolveT1PrintsTheTable) {
  const Outcome run = Evacplan(absl::StrCat("solve ", kT1));
  ASSERT_EQ(run.code, 0) << run.out;
  EXPECT_EQ(run.out.rfind("| Instance | Optimality Gap | Elapsed Time (s) | "
                          "T_evac | Cost  |\n",
                          0),
            0u)
      << run.out;
  const std::vector<std::string> row = TableRow(run.out);
  ASSERT_EQ(row.size(), 5u);
  EXPECT_EQ(row[0], "T1");
  EXPECT_EQ(row[1], "0.00 %");
  EXPECT_EQ(row[3], "26.00");
  EXPECT_EQ(row[4], "26.00");
}

TEST_F(CliTest, GenerateIsReproducible) {
  const std::string a = SmallInstance(4);
  const std::string first = Slurp(a);
  fs::rename(a, Path("first.evac"));
  const std::string b = SmallInstance(4);
  EXPECT_EQ(Slurp(b), first);
  EXPECT_NE(Slurp(SmallInstance(5)), first);
}

TEST_F(CliTest, SolveValidateReport) {
  const std::string inst = SmallInstance(2);
  const std::string plan = Path("plan.txt");
  Outcome run = Evacplan(absl::StrCat("solve ", inst, " --out ", plan));
  ASSERT_EQ(run.code, 0) << run.out;
  const std::vector<std::string> row = TableRow(run.out);
  ASSERT_EQ(row.size(), 5u);

  run = Evacplan(absl::StrCat("validate ", inst, " ", plan));
  EXPECT_EQ(run.code, 0) << run.out;
  EXPECT_EQ(run.out, "feasible\n");

  const std::string routes = Path("routes");
  run = Evacplan(absl::StrCat("report ", inst, " ", plan, " --routes-out ",
                              routes));
  ASSERT_EQ(run.code, 0) << run.out;
  EXPECT_TRUE(fs::exists(fs::path(routes) / "doses.dat"));
  // Cost is the travel column summed over every route file.
  double travel = 0.0;
  int files = 0;
  for (const fs::directory_entry& e : fs::directory_iterator(routes)) {
    if (e.path().extension() != ".route") continue;
    ++files;
    std::istringstream in(Slurp(e.path()));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream fields(line);
      std::string trip, from, to;
      double t = 0.0;
      fields >> trip >> from >> to >> t;
      travel += t;
    }
  }
  EXPECT_EQ(files, 2);
  EXPECT_EQ(absl::StrFormat("%.2f", travel), row[4]);
  EXPECT_NE(run.out.find(absl::StrCat("cost ", row[4])), std::string::npos)
      << run.out;
}

TEST_F(CliTest, ValidateRejectsBrokenPlans) {
  const std::string plan = Path("plan.txt");
  ASSERT_EQ(Evacplan(absl::StrCat("oracle ", kT1, " --out ", plan)).code, 0);
  EXPECT_EQ(Evacplan(absl::StrCat("validate ", kT1, " ", plan)).code, 0);
  // Dropping the last delivery leaves one person on board.
  std::string text = Slurp(plan);
  const size_t at = text.find("b_s_m1_t4 2\n");
  ASSERT_NE(at, std::string::npos) << text;
  text.erase(at, std::string("b_s_m1_t4 2\n").size());
  std::ofstream(plan, std::ios::trunc) << text;
  const Outcome run = Evacplan(absl::StrCat("validate ", kT1, " ", plan));
  EXPECT_EQ(run.code, 2);
  EXPECT_EQ(run.out.rfind("infeasible: ", 0), 0u) << run.out;
}

TEST_F(CliTest, OracleOnT1) {
  const Outcome run = Evacplan(absl::StrCat("oracle ", kT1));
  EXPECT_EQ(run.code, 0);
  EXPECT_EQ(run.out.rfind("optimal cost 26 ", 0), 0u) << run.out;
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Evacplan("").code, 1);
  EXPECT_EQ(Evacplan("solve").code, 1);
  EXPECT_EQ(Evacplan(absl::StrCat("solve ", Path("missing.evac"))).code, 1);
  EXPECT_EQ(Evacplan(absl::StrCat("solve ", kT1, " --mode fancy")).code, 1);

  std::string text = Slurp(kT1);
  text.replace(text.find("p 3"), 3, "p 9");  // more than 4 trips can carry
  std::ofstream(Path("heavy.evac")) << text;
  EXPECT_EQ(Evacplan(absl::StrCat("solve ", Path("heavy.evac"))).code, 2);

  std::ofstream(Path("broken.evac")) << "NAME x\nNODES\n";
  EXPECT_EQ(Evacplan(absl::StrCat("solve ", Path("broken.evac"))).code, 2);

  const Outcome run = Evacplan(absl::StrCat("solve ", kT1, " --time-limit 0"));
  EXPECT_EQ(run.code, 3);
  EXPECT_EQ(TableRow(run.out)[1], "inf");
}

TEST_F(CliTest, SingleWorkerRunsAreIdentical) {
  const std::string inst = SmallInstance(6);
  std::vector<std::string> stats, plans;
  for (int k = 0; k < 2; ++k) {
    const std::string plan = Path(absl::StrCat("plan", k, ".txt"));
    const Outcome run = Evacplan(absl::StrCat("solve ", inst,
                                          " --workers 1 --seed 9 --out ",
                                          plan));
    ASSERT_EQ(run.code, 0);
    std::vector<std::string> row = TableRow(run.out);
    row[2] = "";  // elapsed time
    std::vector<std::string> lines = absl::StrSplit(run.out, '\n');
    stats.push_back(absl::StrCat(absl::StrJoin(row, "|"), "\n", lines[3]));
    plans.push_back(Slurp(plan));
  }
  EXPECT_EQ(stats[0], stats[1]);
  EXPECT_EQ(plans[0], plans[1]);
}

TEST_F(CliTest, SolveAndExportWriteTheSameMps) {
  const std::string inst = SmallInstance(3);
  ASSERT_EQ(Evacplan(absl::StrCat("solve ", inst, " --mps ", Path("a.mps")))
                .code,
            0);
  ASSERT_EQ(Evacplan(absl::StrCat("export ", inst, " --mps ", Path("b.mps")))
                .code,
            0);
  const std::string a = Slurp(Path("a.mps"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, Slurp(Path("b.mps")));
  EXPECT_EQ(Slurp(Path("a.mps.names")), Slurp(Path("b.mps.names")));
}

}  // namespace

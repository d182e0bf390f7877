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

#include "evac/bnb_solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <memory>
#include <mutex>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <thread>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "evac/lp_simplex.h"

namespace evac {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntegralityTolerance = 1e-6;
constexpr double kAcceptViolation = 1e-6;
constexpr double kImprovement = 1e-9;
constexpr double kProgressSeconds = 5.0;

using Clock = std::chrono::steady_clock;

struct BoundChange {
  int var = 0;
  double lower = 0.0;
  double upper = 0.0;
};

struct Node {
  int64_t id = 0;
  int depth = 0;
  double bound = -kInf;
  std::vector<BoundChange> changes;
  std::shared_ptr<const LpBasis> basis;
};

// Max-heap order: the "largest" node is the one to process next.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

double Fractionality(double v) { return std::abs(v - std::round(v)); }

class Search {
 public:
  Search(const MilpProblem& problem, const BnbConfig& config,
         const IncumbentCheck& check, std::span<const double> start)
      : problem_(problem),
        config_(config),
        check_(check),
        start_values_(start),
        start_(Clock::now()),
        granularity_(ObjectiveGranularity(problem)) {
    for (const Variable& v : problem.variables) {
      root_lower_.push_back(v.lower);
      root_upper_.push_back(v.upper);
    }
    for (int j = 0; j < problem.num_variables(); ++j) {
      if (problem.variables[j].is_integer()) integer_vars_.push_back(j);
    }
    for (const Row& row : problem.rows) {
      const bool pure = std::all_of(
          row.terms.begin(), row.terms.end(), [&](const Term& t) {
            return problem.variables[t.var].is_integer();
          });
      if (pure) integer_rows_.push_back(&row);
    }
    has_continuous_ =
        static_cast<int>(integer_vars_.size()) < problem.num_variables();
  }

  absl::StatusOr<MilpResult> Run();

 private:
  struct Worker {
    explicit Worker(const MilpProblem& problem) : lp(problem) {}
    LpSolver lp;
    std::vector<double> lower;
    std::vector<double> upper;
    std::mt19937_64 rng;
  };

  double Elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }
  bool OutOfTime() const { return Elapsed() >= config_.time_limit_s; }
  double RoundBound(double bound) const;
  bool Prunable(double bound) const {
    return upper_bound_ < kInf &&
           bound >= upper_bound_ - kImprovement * std::max(1.0,
                                                           std::abs(
                                                               upper_bound_));
  }
  double OpenBound() const;
  int Priority(int var) const {
    return config_.branch_priority.empty() ? 0 : config_.branch_priority[var];
  }
  // LP objective above which a node cannot improve the incumbent.
  double Cutoff() {
    std::lock_guard<std::mutex> lock(mu_);
    if (upper_bound_ == kInf) return kInf;
    return upper_bound_ - kImprovement * std::max(1.0, std::abs(upper_bound_));
  }

  absl::Status WorkerLoop(int index);
  absl::Status Process(Worker& w, Node node);
  // Tries the integer part of `values` as an incumbent.
  absl::Status TryCandidate(Worker& w, std::span<const double> values,
                            const LpBasis* hint);
  absl::Status Dive(Worker& w, const LpSolution& start);
  void LoadBounds(Worker& w, const Node& node) const;
  void Log(bool force);

  const MilpProblem& problem_;
  const BnbConfig config_;
  const IncumbentCheck& check_;
  const std::span<const double> start_values_;
  const Clock::time_point start_;
  const double granularity_;
  std::vector<double> root_lower_;
  std::vector<double> root_upper_;
  std::vector<int> integer_vars_;
  std::vector<const Row*> integer_rows_;
  bool has_continuous_ = false;

  std::mutex mu_;
  std::condition_variable cv_;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open_;
  std::multiset<double> in_flight_;
  int active_ = 0;
  bool stop_ = false;
  absl::Status error_;
  Termination stop_reason_ = Termination::kOptimal;
  int64_t next_id_ = 0;
  int64_t nodes_ = 0;
  int64_t lp_iterations_ = 0;
  double upper_bound_ = kInf;
  std::vector<double> incumbent_;
  double last_log_ = 0.0;
  bool root_unbounded_ = false;
};

double Search::RoundBound(double bound) const {
  if (granularity_ <= 0.0 || !std::isfinite(bound)) return bound;
  const double units = bound / granularity_;
  return std::ceil(units - 1e-6) * granularity_;
}

double Search::OpenBound() const {
  double lb = upper_bound_;
  if (!open_.empty()) lb = std::min(lb, open_.top().bound);
  if (!in_flight_.empty()) lb = std::min(lb, *in_flight_.begin());
  return lb;
}

void Search::LoadBounds(Worker& w, const Node& node) const {
  w.lower = root_lower_;
  w.upper = root_upper_;
  for (const BoundChange& c : node.changes) {
    w.lower[c.var] = c.lower;
    w.upper[c.var] = c.upper;
  }
}

void Search::Log(bool force) {
  if (!config_.verbose) return;
  const double now = Elapsed();
  if (!force && now - last_log_ < kProgressSeconds) return;
  last_log_ = now;
  const double lb = OpenBound();
  std::fprintf(stderr,
               "[bnb] %8.1fs nodes %8lld open %7zu  lb %.6g  ub %.6g  gap %s\n",
               now, static_cast<long long>(nodes_), open_.size(), lb,
               upper_bound_, FormatGap(RelativeGap(upper_bound_, lb)).c_str());
}

absl::Status Search::TryCandidate(Worker& w, std::span<const double> values,
                                  const LpBasis* hint) {
  std::vector<double> z(values.begin(), values.end());
  for (int j : integer_vars_) {
    z[j] = std::round(z[j]);
    if (z[j] < root_lower_[j] - kAcceptViolation ||
        z[j] > root_upper_[j] + kAcceptViolation) {
      return absl::OkStatus();
    }
  }
  for (const Row* row : integer_rows_) {
    const double lhs = RowActivity(*row, z);
    if (row->sense != RowSense::kGreaterEqual &&
        lhs > row->rhs + kAcceptViolation) {
      return absl::OkStatus();
    }
    if (row->sense != RowSense::kLessEqual &&
        lhs < row->rhs - kAcceptViolation) {
      return absl::OkStatus();
    }
  }
  if (has_continuous_) {
    std::vector<double> lo = root_lower_;
    std::vector<double> up = root_upper_;
    for (int j : integer_vars_) lo[j] = up[j] = z[j];
    w.lp.set_objective_cutoff(kInf);
    absl::StatusOr<LpSolution> polish = w.lp.Solve(lo, up, hint);
    if (!polish.ok()) return polish.status();
    {
      std::lock_guard<std::mutex> lock(mu_);
      lp_iterations_ += polish->iterations;
    }
    if (polish->status != LpStatus::kOptimal) return absl::OkStatus();
    for (int j = 0; j < problem_.num_variables(); ++j) {
      if (!problem_.variables[j].is_integer()) z[j] = polish->primal[j];
    }
  }
  if (MaxViolation(problem_, z) > kAcceptViolation) return absl::OkStatus();
  const double objective = ObjectiveValue(problem_, z);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (objective >= upper_bound_ - kImprovement) return absl::OkStatus();
  }
  if (check_ && !check_(z)) return absl::OkStatus();
  std::lock_guard<std::mutex> lock(mu_);
  if (objective < upper_bound_ - kImprovement) {
    upper_bound_ = objective;
    incumbent_ = std::move(z);
    Log(true);
  }
  return absl::OkStatus();
}

absl::Status Search::Dive(Worker& w, const LpSolution& start) {
  std::vector<double> lo = w.lower;
  std::vector<double> up = w.upper;
  LpSolution current = start;
  std::vector<int> order = integer_vars_;
  std::shuffle(order.begin(), order.end(), w.rng);
  const int max_rounds = static_cast<int>(integer_vars_.size()) + 1;
  for (int round = 0; round < max_rounds; ++round) {
    if (OutOfTime()) return absl::OkStatus();
    int pick = -1;
    double best = kInf;
    for (int j : order) {
      const double f = Fractionality(current.primal[j]);
      if (f <= kIntegralityTolerance) {
        lo[j] = up[j] = std::round(current.primal[j]);
        continue;
      }
      if (f < best) {
        best = f;
        pick = j;
      }
    }
    if (pick < 0) return TryCandidate(w, current.primal, &current.basis);
    const double rounded = std::round(current.primal[pick]);
    const double other = rounded > current.primal[pick]
                             ? std::floor(current.primal[pick])
                             : std::ceil(current.primal[pick]);
    bool progressed = false;
    for (double value : {rounded, other}) {
      std::vector<double> try_lo = lo;
      std::vector<double> try_up = up;
      try_lo[pick] = try_up[pick] = value;
      w.lp.set_objective_cutoff(Cutoff());
      absl::StatusOr<LpSolution> next =
          w.lp.Solve(try_lo, try_up, &current.basis);
      if (!next.ok()) return next.status();
      {
        std::lock_guard<std::mutex> lock(mu_);
        lp_iterations_ += next->iterations;
        if (next->status == LpStatus::kCutoff ||
            (next->status == LpStatus::kOptimal &&
             Prunable(RoundBound(next->objective)))) {
          return absl::OkStatus();
        }
      }
      if (next->status == LpStatus::kOptimal) {
        lo = std::move(try_lo);
        up = std::move(try_up);
        current = *std::move(next);
        progressed = true;
        break;
      }
    }
    if (!progressed) return absl::OkStatus();
  }
  return absl::OkStatus();
}

absl::Status Search::Process(Worker& w, Node node) {
  LoadBounds(w, node);
  w.lp.set_objective_cutoff(Cutoff());
  absl::StatusOr<LpSolution> lp = w.lp.Solve(w.lower, w.upper,
                                             node.basis.get());
  if (lp.ok() && lp->status == LpStatus::kIterationLimit) {
    lp = w.lp.Solve(w.lower, w.upper, nullptr);
  }
  if (!lp.ok()) return lp.status();
  int64_t node_number = 0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    lp_iterations_ += lp->iterations;
    node_number = ++nodes_;
  }
  if (lp->status == LpStatus::kInfeasible ||
      lp->status == LpStatus::kCutoff) {
    return absl::OkStatus();
  }
  if (lp->status == LpStatus::kUnbounded) {
    std::lock_guard<std::mutex> lock(mu_);
    root_unbounded_ = true;
    return absl::InvalidArgumentError("the LP relaxation is unbounded");
  }

  int branch_var = -1;
  double bound = node.bound;
  if (lp->status == LpStatus::kOptimal) {
    bound = std::max(bound, RoundBound(lp->objective));
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (Prunable(bound)) return absl::OkStatus();
    }
    double most = kIntegralityTolerance;
    int rank = std::numeric_limits<int>::min();
    for (int j : integer_vars_) {
      const double f = Fractionality(lp->primal[j]);
      if (f <= kIntegralityTolerance) continue;
      const int r = Priority(j);
      if (r > rank || (r == rank && f > most + 1e-12)) {
        rank = r;
        most = f;
        branch_var = j;
      }
    }
    absl::Status s = TryCandidate(w, lp->primal, &lp->basis);
    if (!s.ok()) return s;
    if (branch_var < 0) return absl::OkStatus();
    if (config_.dive_interval > 0 &&
        (node_number == 1 || node_number % config_.dive_interval == 0)) {
      s = Dive(w, *lp);
      if (!s.ok()) return s;
    }
  } else {
    // Iteration limit twice: branch on the first unfixed integer variable.
    for (int j : integer_vars_) {
      if (w.lower[j] < w.upper[j]) {
        branch_var = j;
        break;
      }
    }
    if (branch_var < 0) return absl::OkStatus();
  }

  const double value = lp->status == LpStatus::kOptimal
                           ? lp->primal[branch_var]
                           : 0.5 * (w.lower[branch_var] + w.upper[branch_var]);
  auto basis = std::make_shared<const LpBasis>(std::move(lp->basis));
  std::lock_guard<std::mutex> lock(mu_);
  if (Prunable(bound)) return absl::OkStatus();
  for (int side = 0; side < 2; ++side) {
    Node child;
    child.id = next_id_++;
    child.depth = node.depth + 1;
    child.bound = bound;
    child.basis = basis;
    child.changes = node.changes;
    BoundChange change{branch_var, w.lower[branch_var], w.upper[branch_var]};
    if (side == 0) {
      change.upper = std::floor(value);
    } else {
      change.lower = std::floor(value) + 1.0;
    }
    if (change.lower > change.upper) continue;
    child.changes.push_back(change);
    open_.push(std::move(child));
  }
  return absl::OkStatus();
}

absl::Status Search::WorkerLoop(int index) {
  Worker w(problem_);
  w.rng.seed(config_.seed + static_cast<uint64_t>(index));
  while (true) {
    Node node;
    double flight_bound = 0.0;
    {
      std::unique_lock<std::mutex> lock(mu_);
      cv_.wait(lock, [&] { return stop_ || !open_.empty() || active_ == 0; });
      if (stop_) return absl::OkStatus();
      // Discard nodes that can no longer improve on the incumbent.
      while (!open_.empty() && Prunable(open_.top().bound)) open_.pop();
      if (open_.empty()) {
        if (active_ == 0) {
          stop_ = true;
          stop_reason_ = Termination::kOptimal;
          cv_.notify_all();
          return absl::OkStatus();
        }
        continue;
      }
      const double lb = OpenBound();
      if (upper_bound_ < kInf &&
          RelativeGap(upper_bound_, lb) <= config_.gap_tolerance) {
        stop_ = true;
        stop_reason_ = Termination::kGapReached;
        cv_.notify_all();
        return absl::OkStatus();
      }
      if (OutOfTime()) {
        stop_ = true;
        stop_reason_ = Termination::kTimeLimit;
        cv_.notify_all();
        return absl::OkStatus();
      }
      if (config_.node_limit > 0 && nodes_ >= config_.node_limit) {
        stop_ = true;
        stop_reason_ = Termination::kNodeLimit;
        cv_.notify_all();
        return absl::OkStatus();
      }
      node = open_.top();
      open_.pop();
      flight_bound = node.bound;
      in_flight_.insert(flight_bound);
      ++active_;
      Log(false);
    }
    absl::Status s = Process(w, std::move(node));
    std::lock_guard<std::mutex> lock(mu_);
    in_flight_.erase(in_flight_.find(flight_bound));
    --active_;
    if (!s.ok()) {
      if (error_.ok()) error_ = s;
      stop_ = true;
    }
    cv_.notify_all();
    if (stop_) return absl::OkStatus();
  }
}

absl::StatusOr<MilpResult> Search::Run() {
  MilpResult result;
  SolveStats& stats = result.stats;
  if (config_.time_limit_s <= 0.0) {
    stats.termination = Termination::kTimeLimit;
    stats.wall_seconds = Elapsed();
    return result;
  }
  if (static_cast<int>(start_values_.size()) == problem_.num_variables()) {
    Worker w(problem_);
    absl::Status s = TryCandidate(w, start_values_, nullptr);
    if (!s.ok()) return s;
  }
  Node root;
  root.id = next_id_++;
  open_.push(std::move(root));

  const int workers = std::max(1, config_.workers);
  if (workers == 1) {
    absl::Status s = WorkerLoop(0);
    if (!s.ok()) return s;
  } else {
    std::vector<std::thread> threads;
    std::vector<absl::Status> statuses(workers);
    for (int k = 0; k < workers; ++k) {
      threads.emplace_back([this, k, &statuses] {
        statuses[k] = WorkerLoop(k);
      });
    }
    for (std::thread& t : threads) t.join();
    for (const absl::Status& s : statuses) {
      if (!s.ok()) return s;
    }
  }
  if (!error_.ok()) return error_;

  stats.nodes = nodes_;
  stats.lp_iterations = lp_iterations_;
  stats.upper_bound = upper_bound_;
  stats.termination = stop_reason_;
  if (stop_reason_ == Termination::kOptimal) {
    if (upper_bound_ == kInf) {
      stats.termination = Termination::kInfeasible;
      stats.lower_bound = kInf;
    } else {
      stats.lower_bound = upper_bound_;
    }
  } else {
    stats.lower_bound = OpenBound();
  }
  stats.gap = RelativeGap(stats.upper_bound, stats.lower_bound);
  result.solution = incumbent_;
  stats.wall_seconds = Elapsed();
  Log(true);
  return result;
}

}  // namespace

const char* TerminationName(Termination termination) {
  switch (termination) {
    case Termination::kOptimal:
      return "optimal";
    case Termination::kGapReached:
      return "gap-reached";
    case Termination::kTimeLimit:
      return "time-limit";
    case Termination::kNodeLimit:
      return "node-limit";
    case Termination::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

double RelativeGap(double upper_bound, double lower_bound) {
  if (!std::isfinite(upper_bound)) return kInf;
  if (!std::isfinite(lower_bound)) return kInf;
  return std::max(0.0, (upper_bound - lower_bound) /
                           (1e-10 + std::abs(upper_bound)));
}

std::string FormatGap(double gap) {
  if (!std::isfinite(gap)) return "inf";
  return absl::StrFormat("%.2f %%", 100.0 * gap);
}

double ObjectiveGranularity(const MilpProblem& problem) {
  std::vector<double> coefs;
  for (const Variable& v : problem.variables) {
    if (v.objective == 0.0) continue;
    if (!v.is_integer()) return 0.0;
    coefs.push_back(std::abs(v.objective));
  }
  if (coefs.empty()) return 0.0;
  for (int digits = 0; digits <= 6; ++digits) {
    const double scale = std::pow(10.0, digits);
    int64_t g = 0;
    bool ok = true;
    for (double c : coefs) {
      const double scaled = c * scale;
      const double rounded = std::round(scaled);
      if (std::abs(scaled - rounded) > 1e-9 * std::max(1.0, scaled) ||
          rounded > 9e15) {
        ok = false;
        break;
      }
      g = std::gcd(g, static_cast<int64_t>(rounded));
    }
    if (ok && g > 0) return static_cast<double>(g) / scale;
  }
  return 0.0;
}

absl::StatusOr<MilpResult> SolveMilp(const MilpProblem& problem,
                                     const BnbConfig& config,
                                     const IncumbentCheck& check,
                                     std::span<const double> start) {
  absl::Status valid = ValidateProblem(problem);
  if (!valid.ok()) return valid;
  if (!(config.gap_tolerance >= 0.0)) {
    return absl::InvalidArgumentError("gap tolerance must be nonnegative");
  }
  if (!config.branch_priority.empty() &&
      static_cast<int>(config.branch_priority.size()) !=
          problem.num_variables()) {
    return absl::InvalidArgumentError(
        "branch_priority needs one entry per variable");
  }
  Search search(problem, config, check, start);
  return search.Run();
}

}  // namespace evac

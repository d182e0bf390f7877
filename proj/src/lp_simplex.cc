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


#include "evac/lp_simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "evac/basis_factor.h"

namespace evac {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Steps shorter than this count as degenerate.
constexpr double kDegenerateStep = 1e-12;
// Unscaled violation that triggers a re-solve without scaling.
constexpr double kUnscaledViolation = 1e-6;
constexpr int kScalingPasses = 4;
// Relative disagreement between the pivot seen from the row and from the
// column above which the basis is refactorized before pivoting.
constexpr double kPivotDrift = 1e-7;
// Dual simplex iterations between objective cutoff checks.
constexpr int kCutoffCheckInterval = 4;

double PowerOfTwo(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) return 1.0;
  return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(x))));
}

}  // namespace

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
    case LpStatus::kCutoff:
      return "cutoff";
  }
  return "unknown";
}

class SimplexEngine {
 public:
  SimplexEngine(const MilpProblem& problem, const LpOptions& options);

  int n() const { return n_; }
  int m() const { return m_; }
  const LpOptions& options() const { return options_; }

  void SetScaling(bool enabled);
  bool scaling() const { return scaling_; }
  void set_cutoff(double cutoff) { cutoff_ = cutoff; }
  // Unscaled structural bounds.
  void SetBounds(std::span<const double> lower, std::span<const double> upper);
  void InitBasis(const LpBasis* hint);
  void ResetIterations() { iterations_ = 0; }
  absl::StatusOr<LpStatus> RunPrimal(bool phase1_only);
  // nullopt when the basis cannot be made dual feasible; the primal
  // simplex then continues from wherever the dual stopped.
  absl::StatusOr<std::optional<LpStatus>> RunDual();
  LpSolution Extract(LpStatus status);

 private:
  double Cost(int j) const { return j < n_ ? cost_[j] : 0.0; }
  double ColumnDot(int j, const std::vector<double>& y) const;
  void LoadColumn(int j, std::vector<double>& out) const;
  void SetNonbasicValue(int j);
  void SlackBasis();
  bool Refactor();
  void ComputeBasics();
  void ComputeReducedCosts();
  bool MakeDualFeasible();
  double Infeasibility() const;
  double Objective() const;
  void Rescale();
  int64_t IterationLimit() const;
  absl::Status Recover();
  void Pivot(int r, int q, std::vector<double>& alpha);

  LpOptions options_;
  int n_ = 0;
  int m_ = 0;
  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> raw_value_;
  std::vector<double> value_;
  // Row-wise copy of the scaled matrix.
  std::vector<int> row_start_;
  std::vector<int> row_col_;
  std::vector<int> row_entry_;
  std::vector<double> raw_cost_;
  std::vector<double> cost_;
  std::vector<double> row_lower_;
  std::vector<double> row_upper_;
  std::vector<double> row_scale_;
  std::vector<double> col_scale_;
  std::vector<double> computed_row_scale_;
  std::vector<double> computed_col_scale_;
  bool scaling_ = false;
  double cutoff_ = kInf;

  std::vector<double> lo_;
  std::vector<double> up_;
  std::vector<double> x_;
  std::vector<double> d_;
  std::vector<BasisStatus> status_;
  std::vector<int> head_;
  BasisFactor factor_;
  std::vector<SparseColumn> basis_columns_;
  int64_t iterations_ = 0;
  int failures_ = 0;
  bool bounds_conflict_ = false;
};

SimplexEngine::SimplexEngine(const MilpProblem& problem,
                             const LpOptions& options)
    : options_(options), n_(problem.num_variables()), m_(problem.num_rows()) {
  std::vector<std::vector<std::pair<int, double>>> columns(n_);
  row_lower_.assign(m_, -kInf);
  row_upper_.assign(m_, kInf);
  for (int i = 0; i < m_; ++i) {
    const Row& row = problem.rows[i];
    for (const Term& t : row.terms) {
      if (t.coef != 0.0) columns[t.var].push_back({i, t.coef});
    }
    if (row.sense != RowSense::kLessEqual) row_lower_[i] = row.rhs;
    if (row.sense != RowSense::kGreaterEqual) row_upper_[i] = row.rhs;
  }
  col_start_.push_back(0);
  for (auto& col : columns) {
    std::sort(col.begin(), col.end());
    // Merge repeated references to the same row.
    for (size_t k = 0; k < col.size(); ++k) {
      if (static_cast<int>(row_index_.size()) > col_start_.back() &&
          row_index_.back() == col[k].first) {
        raw_value_.back() += col[k].second;
      } else {
        row_index_.push_back(col[k].first);
        raw_value_.push_back(col[k].second);
      }
    }
    col_start_.push_back(static_cast<int>(row_index_.size()));
  }
  row_start_.assign(m_ + 1, 0);
  for (int i : row_index_) ++row_start_[i + 1];
  for (int i = 0; i < m_; ++i) row_start_[i + 1] += row_start_[i];
  row_col_.resize(row_index_.size());
  row_entry_.resize(row_index_.size());
  {
    std::vector<int> fill(row_start_.begin(), row_start_.end() - 1);
    for (int j = 0; j < n_; ++j) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        const int slot = fill[row_index_[k]]++;
        row_col_[slot] = j;
        row_entry_[slot] = k;
      }
    }
  }
  raw_cost_.resize(n_);
  for (int j = 0; j < n_; ++j) raw_cost_[j] = problem.variables[j].objective;

  // Geometric-mean equilibration, rounded to powers of two.
  computed_row_scale_.assign(m_, 1.0);
  computed_col_scale_.assign(n_, 1.0);
  if (options_.scale) {
    for (int pass = 0; pass < kScalingPasses; ++pass) {
      std::vector<double> rmin(m_, kInf), rmax(m_, 0.0);
      for (int j = 0; j < n_; ++j) {
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
          const int i = row_index_[k];
          const double a = std::abs(raw_value_[k]) * computed_row_scale_[i] *
                           computed_col_scale_[j];
          if (a == 0.0) continue;
          rmin[i] = std::min(rmin[i], a);
          rmax[i] = std::max(rmax[i], a);
        }
      }
      for (int i = 0; i < m_; ++i) {
        if (rmax[i] > 0.0) {
          computed_row_scale_[i] /= std::sqrt(rmin[i] * rmax[i]);
        }
      }
      for (int j = 0; j < n_; ++j) {
        double cmin = kInf, cmax = 0.0;
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
          const double a = std::abs(raw_value_[k]) *
                           computed_row_scale_[row_index_[k]] *
                           computed_col_scale_[j];
          if (a == 0.0) continue;
          cmin = std::min(cmin, a);
          cmax = std::max(cmax, a);
        }
        if (cmax > 0.0) computed_col_scale_[j] /= std::sqrt(cmin * cmax);
      }
    }
    for (double& r : computed_row_scale_) r = PowerOfTwo(r);
    for (double& c : computed_col_scale_) c = PowerOfTwo(c);
  }
  basis_columns_.resize(m_);
  SetScaling(options_.scale);
}

void SimplexEngine::SetScaling(bool enabled) {
  scaling_ = enabled;
  if (enabled) {
    row_scale_ = computed_row_scale_;
    col_scale_ = computed_col_scale_;
  } else {
    row_scale_.assign(m_, 1.0);
    col_scale_.assign(n_, 1.0);
  }
  Rescale();
}

void SimplexEngine::Rescale() {
  value_.resize(raw_value_.size());
  for (int j = 0; j < n_; ++j) {
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      value_[k] = raw_value_[k] * row_scale_[row_index_[k]] * col_scale_[j];
    }
  }
  cost_.resize(n_);
  for (int j = 0; j < n_; ++j) cost_[j] = raw_cost_[j] * col_scale_[j];
}

void SimplexEngine::SetBounds(std::span<const double> lower,
                              std::span<const double> upper) {
  lo_.resize(n_ + m_);
  up_.resize(n_ + m_);
  bounds_conflict_ = false;
  for (int j = 0; j < n_; ++j) {
    lo_[j] = lower[j] / col_scale_[j];
    up_[j] = upper[j] / col_scale_[j];
    if (lower[j] > upper[j]) bounds_conflict_ = true;
  }
  for (int i = 0; i < m_; ++i) {
    lo_[n_ + i] = row_lower_[i] * row_scale_[i];
    up_[n_ + i] = row_upper_[i] * row_scale_[i];
  }
}

void SimplexEngine::SetNonbasicValue(int j) {
  BasisStatus& s = status_[j];
  if (s == BasisStatus::kAtLower && !std::isfinite(lo_[j])) {
    s = std::isfinite(up_[j]) ? BasisStatus::kAtUpper : BasisStatus::kFree;
  } else if (s == BasisStatus::kAtUpper && !std::isfinite(up_[j])) {
    s = std::isfinite(lo_[j]) ? BasisStatus::kAtLower : BasisStatus::kFree;
  } else if (s == BasisStatus::kFree || s == BasisStatus::kBasic) {
    if (std::isfinite(lo_[j])) {
      s = BasisStatus::kAtLower;
    } else if (std::isfinite(up_[j])) {
      s = BasisStatus::kAtUpper;
    } else {
      s = BasisStatus::kFree;
    }
  }
  switch (s) {
    case BasisStatus::kAtLower:
      x_[j] = lo_[j];
      break;
    case BasisStatus::kAtUpper:
      x_[j] = up_[j];
      break;
    default:
      x_[j] = 0.0;
      break;
  }
}

void SimplexEngine::SlackBasis() {
  const int total = n_ + m_;
  status_.assign(total, BasisStatus::kAtLower);
  x_.assign(total, 0.0);
  head_.resize(m_);
  for (int j = 0; j < n_; ++j) SetNonbasicValue(j);
  for (int i = 0; i < m_; ++i) {
    status_[n_ + i] = BasisStatus::kBasic;
    head_[i] = n_ + i;
  }
}

void SimplexEngine::InitBasis(const LpBasis* hint) {
  const int total = n_ + m_;
  failures_ = 0;
  bool usable = hint != nullptr &&
                static_cast<int>(hint->status.size()) == total &&
                std::count(hint->status.begin(), hint->status.end(),
                           BasisStatus::kBasic) == m_;
  if (!usable) {
    SlackBasis();
    return;
  }
  status_ = hint->status;
  x_.assign(total, 0.0);
  head_.clear();
  for (int j = 0; j < total; ++j) {
    if (status_[j] == BasisStatus::kBasic) {
      head_.push_back(j);
    } else {
      SetNonbasicValue(j);
    }
  }
}

int64_t SimplexEngine::IterationLimit() const {
  return options_.iteration_limit > 0
             ? options_.iteration_limit
             : std::max<int64_t>(20000, 20 * static_cast<int64_t>(n_ + m_));
}

double SimplexEngine::ColumnDot(int j, const std::vector<double>& y) const {
  if (j >= n_) return -y[j - n_];
  double sum = 0.0;
  for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
    sum += value_[k] * y[row_index_[k]];
  }
  return sum;
}

void SimplexEngine::LoadColumn(int j, std::vector<double>& out) const {
  out.assign(m_, 0.0);
  if (j >= n_) {
    out[j - n_] = -1.0;
    return;
  }
  for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
    out[row_index_[k]] = value_[k];
  }
}

bool SimplexEngine::Refactor() {
  if (m_ == 0) return true;
  for (int attempt = 0; attempt < 2; ++attempt) {
    for (int p = 0; p < m_; ++p) {
      SparseColumn& col = basis_columns_[p];
      col.index.clear();
      col.value.clear();
      const int j = head_[p];
      if (j >= n_) {
        col.index.push_back(j - n_);
        col.value.push_back(-1.0);
      } else {
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
          col.index.push_back(row_index_[k]);
          col.value.push_back(value_[k]);
        }
      }
    }
    const std::vector<std::pair<int, int>> unpivoted =
        factor_.Factorize(m_, basis_columns_, options_.pivot_tolerance);
    if (unpivoted.empty()) return true;
    // Swap the dependent columns for the logicals of the uncovered rows.
    for (const auto& [p, row] : unpivoted) {
      const int logical = n_ + row;
      if (status_[logical] == BasisStatus::kBasic) return false;
      const int leaving = head_[p];
      status_[leaving] = BasisStatus::kAtLower;
      SetNonbasicValue(leaving);
      head_[p] = logical;
      status_[logical] = BasisStatus::kBasic;
    }
  }
  return false;
}

absl::Status SimplexEngine::Recover() {
  if (++failures_ > options_.max_refactor_retries) {
    return absl::InternalError(absl::StrCat(
        "simplex numerical breakdown after ", failures_ - 1,
        " basis recoveries"));
  }
  SlackBasis();
  if (!Refactor()) return absl::InternalError("slack basis is singular");
  ComputeBasics();
  return absl::OkStatus();
}

void SimplexEngine::ComputeBasics() {
  if (m_ == 0) return;
  std::vector<double> rhs(m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] == BasisStatus::kBasic || x_[j] == 0.0) continue;
    if (j >= n_) {
      rhs[j - n_] += x_[j];
    } else {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        rhs[row_index_[k]] -= value_[k] * x_[j];
      }
    }
  }
  factor_.Ftran(rhs);
  for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
}

void SimplexEngine::ComputeReducedCosts() {
  std::vector<double> y(m_);
  for (int p = 0; p < m_; ++p) y[p] = Cost(head_[p]);
  if (m_ > 0) factor_.Btran(y);
  d_.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] != BasisStatus::kBasic) d_[j] = Cost(j) - ColumnDot(j, y);
  }
}

// Flips boxed variables whose reduced cost has the wrong sign; false when an
// unboxed one does.
bool SimplexEngine::MakeDualFeasible() {
  const double otol = options_.optimality_tolerance;
  bool flipped = false;
  for (int j = 0; j < n_ + m_; ++j) {
    const BasisStatus s = status_[j];
    if (s == BasisStatus::kBasic || lo_[j] == up_[j]) continue;
    const double d = d_[j];
    if (s == BasisStatus::kAtLower && d < -otol) {
      if (!std::isfinite(up_[j])) return false;
      status_[j] = BasisStatus::kAtUpper;
      x_[j] = up_[j];
      flipped = true;
    } else if (s == BasisStatus::kAtUpper && d > otol) {
      if (!std::isfinite(lo_[j])) return false;
      status_[j] = BasisStatus::kAtLower;
      x_[j] = lo_[j];
      flipped = true;
    } else if (s == BasisStatus::kFree && std::abs(d) > otol) {
      return false;
    }
  }
  if (flipped) ComputeBasics();
  return true;
}

double SimplexEngine::Infeasibility() const {
  const double tol = options_.feasibility_tolerance;
  double sum = 0.0;
  for (int p = 0; p < m_; ++p) {
    const int j = head_[p];
    if (x_[j] < lo_[j] - tol) sum += lo_[j] - x_[j];
    if (x_[j] > up_[j] + tol) sum += x_[j] - up_[j];
  }
  return sum;
}

double SimplexEngine::Objective() const {
  double sum = 0.0;
  for (int j = 0; j < n_; ++j) sum += cost_[j] * x_[j];
  return sum;
}

void SimplexEngine::Pivot(int r, int q, std::vector<double>& alpha) {
  head_[r] = q;
  status_[q] = BasisStatus::kBasic;
  factor_.Update(r, alpha);
}

absl::StatusOr<std::optional<LpStatus>> SimplexEngine::RunDual() {
  if (bounds_conflict_) return std::optional<LpStatus>(LpStatus::kInfeasible);
  const double ftol = options_.feasibility_tolerance;
  const double otol = options_.optimality_tolerance;
  const double ptol = options_.pivot_tolerance;
  const int total = n_ + m_;
  const int64_t limit = IterationLimit();

  if (!Refactor()) {
    absl::Status s = Recover();
    if (!s.ok()) return s;
  }
  ComputeBasics();
  ComputeReducedCosts();
  if (!MakeDualFeasible()) return std::optional<LpStatus>();

  std::vector<double> rho(m_), alpha_row(total, 0.0), alpha(m_);
  std::vector<int> touched;
  std::vector<char> mark(total, 0);
  int since_check = 0;
  while (true) {
    if (factor_.num_updates() >= options_.refactor_interval) {
      if (!Refactor()) {
        absl::Status s = Recover();
        if (!s.ok()) return s;
      }
      ComputeBasics();
      ComputeReducedCosts();
      if (!MakeDualFeasible()) return std::optional<LpStatus>();
    }
    if (std::isfinite(cutoff_) && ++since_check >= kCutoffCheckInterval) {
      since_check = 0;
      if (Objective() > cutoff_) return std::optional<LpStatus>(LpStatus::kCutoff);
    }

    // Leaving row: largest bound violation.
    int r = -1;
    double worst = ftol;
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      const double v = std::max(lo_[j] - x_[j], x_[j] - up_[j]);
      if (v > worst) {
        worst = v;
        r = p;
      }
    }
    if (r < 0) {
      if (factor_.num_updates() > 0) {
        if (!Refactor()) {
          absl::Status s = Recover();
          if (!s.ok()) return s;
        }
        ComputeBasics();
        ComputeReducedCosts();
        if (!MakeDualFeasible()) return std::optional<LpStatus>();
        bool clean = true;
        for (int p = 0; p < m_ && clean; ++p) {
          const int j = head_[p];
          clean = x_[j] >= lo_[j] - ftol && x_[j] <= up_[j] + ftol;
        }
        if (!clean) continue;
      }
      return std::optional<LpStatus>(LpStatus::kOptimal);
    }
    if (iterations_ >= limit) {
      return std::optional<LpStatus>(LpStatus::kIterationLimit);
    }

    const int leaving = head_[r];
    const bool to_lower = x_[leaving] < lo_[leaving];
    const double target = to_lower ? lo_[leaving] : up_[leaving];

    std::fill(rho.begin(), rho.end(), 0.0);
    rho[r] = 1.0;
    factor_.Btran(rho);

    // alpha_row[j] = rho . a_j over the nonbasic columns.
    for (int j : touched) {
      alpha_row[j] = 0.0;
      mark[j] = 0;
    }
    touched.clear();
    for (int i = 0; i < m_; ++i) {
      const double ri = rho[i];
      if (ri == 0.0) continue;
      for (int k = row_start_[i]; k < row_start_[i + 1]; ++k) {
        const int j = row_col_[k];
        if (status_[j] == BasisStatus::kBasic) continue;
        if (!mark[j]) {
          mark[j] = 1;
          touched.push_back(j);
        }
        alpha_row[j] += ri * value_[row_entry_[k]];
      }
      const int logical = n_ + i;
      if (status_[logical] != BasisStatus::kBasic) {
        if (!mark[logical]) {
          mark[logical] = 1;
          touched.push_back(logical);
        }
        alpha_row[logical] -= ri;
      }
    }

    // Harris ratio test on the dual: entering j keeps d_j / alpha_j signs.
    auto eligible = [&](int j, double a) {
      if (std::abs(a) <= ptol || lo_[j] == up_[j]) return false;
      const BasisStatus s = status_[j];
      if (s == BasisStatus::kFree) return true;
      const bool increase = to_lower ? a < 0.0 : a > 0.0;
      return s == BasisStatus::kAtLower ? increase : !increase;
    };
    double theta_max = kInf;
    for (int j : touched) {
      const double a = alpha_row[j];
      if (!eligible(j, a)) continue;
      theta_max =
          std::min(theta_max, (std::abs(d_[j]) + otol) / std::abs(a));
    }
    int q = -1;
    double best_alpha = 0.0;
    for (int j : touched) {
      const double a = alpha_row[j];
      if (!eligible(j, a)) continue;
      const double ratio = std::abs(d_[j]) / std::abs(a);
      if (ratio <= theta_max && std::abs(a) > best_alpha) {
        best_alpha = std::abs(a);
        q = j;
      }
    }
    if (q < 0) {
      if (factor_.num_updates() > 0) {
        if (!Refactor()) {
          absl::Status s = Recover();
          if (!s.ok()) return s;
        }
        ComputeBasics();
        ComputeReducedCosts();
        if (!MakeDualFeasible()) return std::optional<LpStatus>();
        continue;
      }
      return std::optional<LpStatus>(LpStatus::kInfeasible);
    }

    LoadColumn(q, alpha);
    factor_.Ftran(alpha);
    const double pivot_row_view = alpha_row[q];
    if (std::abs(alpha[r] - pivot_row_view) >
            kPivotDrift * (1.0 + std::abs(alpha[r])) ||
        std::abs(alpha[r]) <= ptol) {
      if (factor_.num_updates() > 0) {
        if (!Refactor()) {
          absl::Status s = Recover();
          if (!s.ok()) return s;
        }
        ComputeBasics();
        ComputeReducedCosts();
        if (!MakeDualFeasible()) return std::optional<LpStatus>();
        continue;
      }
      if (std::abs(alpha[r]) <= ptol) {
        absl::Status s = Recover();
        if (!s.ok()) return s;
        return std::optional<LpStatus>();
      }
    }
    ++iterations_;

    // Dual step; a slightly wrong-signed d_q is treated as zero.
    double theta_d = d_[q] / alpha_row[q];
    const bool leaving_at_lower = to_lower;
    if (leaving_at_lower ? theta_d > 0.0 : theta_d < 0.0) theta_d = 0.0;
    for (int j : touched) {
      if (j != q) d_[j] -= theta_d * alpha_row[j];
    }
    d_[q] = 0.0;
    d_[leaving] = -theta_d;

    // Primal step.
    const double step = (x_[leaving] - target) / alpha[r];
    x_[q] += step;
    for (int p = 0; p < m_; ++p) {
      if (alpha[p] != 0.0) x_[head_[p]] -= alpha[p] * step;
    }
    status_[leaving] =
        to_lower ? BasisStatus::kAtLower : BasisStatus::kAtUpper;
    x_[leaving] = target;
    Pivot(r, q, alpha);
  }
}

absl::StatusOr<LpStatus> SimplexEngine::RunPrimal(bool phase1_only) {
  if (bounds_conflict_) return LpStatus::kInfeasible;
  const double ftol = options_.feasibility_tolerance;
  const double otol = options_.optimality_tolerance;
  const double ptol = options_.pivot_tolerance;
  const int total = n_ + m_;
  const int64_t limit = IterationLimit();

  if (!Refactor()) {
    absl::Status s = Recover();
    if (!s.ok()) return s;
  }
  ComputeBasics();

  std::vector<double> y(m_), alpha(m_);
  std::vector<double> basic_cost(m_);
  int degenerate_run = 0;
  auto refresh = [&]() -> absl::Status {
    if (!Refactor()) return Recover();
    ComputeBasics();
    return absl::OkStatus();
  };
  while (true) {
    if (factor_.num_updates() >= options_.refactor_interval) {
      absl::Status s = refresh();
      if (!s.ok()) return s;
    }

    bool phase1 = false;
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      if (x_[j] < lo_[j] - ftol) {
        basic_cost[p] = -1.0;
        phase1 = true;
      } else if (x_[j] > up_[j] + ftol) {
        basic_cost[p] = 1.0;
        phase1 = true;
      } else {
        basic_cost[p] = 0.0;
      }
    }
    if (!phase1 && phase1_only) {
      if (factor_.num_updates() > 0) {
        absl::Status s = refresh();
        if (!s.ok()) return s;
        continue;
      }
      return LpStatus::kOptimal;
    }
    if (!phase1) {
      for (int p = 0; p < m_; ++p) basic_cost[p] = Cost(head_[p]);
    }
    for (int p = 0; p < m_; ++p) y[p] = basic_cost[p];
    if (m_ > 0) factor_.Btran(y);

    // Pricing.
    const bool bland =
        degenerate_run > options_.degenerate_pivots_before_bland;
    int q = -1;
    double dq = 0.0;
    double best = 0.0;
    for (int j = 0; j < total; ++j) {
      const BasisStatus s = status_[j];
      if (s == BasisStatus::kBasic || lo_[j] == up_[j]) continue;
      const double d = (phase1 ? 0.0 : Cost(j)) - ColumnDot(j, y);
      bool eligible = false;
      if (s == BasisStatus::kAtLower) {
        eligible = d < -otol;
      } else if (s == BasisStatus::kAtUpper) {
        eligible = d > otol;
      } else {
        eligible = std::abs(d) > otol;
      }
      if (!eligible) continue;
      if (bland) {
        q = j;
        dq = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        dq = d;
      }
    }
    if (q < 0) {
      if (factor_.num_updates() > 0) {
        // Confirm on a fresh factorization.
        absl::Status s = refresh();
        if (!s.ok()) return s;
        continue;
      }
      return phase1 ? LpStatus::kInfeasible : LpStatus::kOptimal;
    }
    if (iterations_ >= limit) return LpStatus::kIterationLimit;
    ++iterations_;

    LoadColumn(q, alpha);
    if (m_ > 0) factor_.Ftran(alpha);
    const double dir = dq < 0.0 ? 1.0 : -1.0;

    // Ratio test. For each basic variable find the bound it runs into; the
    // relaxed pass widens feasible bounds by the tolerance.
    auto target = [&](int p, double delta, bool relaxed, double* bound) {
      const int j = head_[p];
      const double xj = x_[j];
      if (delta > 0.0) {
        if (phase1 && xj < lo_[j] - ftol) {
          *bound = lo_[j];
          return true;
        }
        if (xj > up_[j] + ftol || !std::isfinite(up_[j])) return false;
        *bound = up_[j] + (relaxed ? ftol : 0.0);
        return true;
      }
      if (phase1 && xj > up_[j] + ftol) {
        *bound = up_[j];
        return true;
      }
      if (xj < lo_[j] - ftol || !std::isfinite(lo_[j])) return false;
      *bound = lo_[j] - (relaxed ? ftol : 0.0);
      return true;
    };

    int r = -1;
    double theta = kInf;
    bool leave_upper = false;
    if (bland) {
      for (int p = 0; p < m_; ++p) {
        const double delta = -dir * alpha[p];
        if (std::abs(alpha[p]) <= ptol) continue;
        double bound;
        if (!target(p, delta, false, &bound)) continue;
        const double ratio = std::max(0.0, (bound - x_[head_[p]]) / delta);
        if (ratio < theta - kDegenerateStep ||
            (ratio <= theta + kDegenerateStep && r >= 0 &&
             head_[p] < head_[r])) {
          theta = std::min(theta, ratio);
          r = p;
          leave_upper = bound == up_[head_[p]];
        }
      }
    } else {
      double theta_max = kInf;
      for (int p = 0; p < m_; ++p) {
        if (std::abs(alpha[p]) <= ptol) continue;
        const double delta = -dir * alpha[p];
        double bound;
        if (!target(p, delta, true, &bound)) continue;
        theta_max = std::min(theta_max, (bound - x_[head_[p]]) / delta);
      }
      double best_alpha = 0.0;
      for (int p = 0; p < m_; ++p) {
        if (std::abs(alpha[p]) <= ptol) continue;
        const double delta = -dir * alpha[p];
        double bound;
        if (!target(p, delta, false, &bound)) continue;
        const double ratio = (bound - x_[head_[p]]) / delta;
        if (ratio <= theta_max && std::abs(alpha[p]) > best_alpha) {
          best_alpha = std::abs(alpha[p]);
          r = p;
          theta = ratio;
          leave_upper = bound == up_[head_[p]];
        }
      }
      if (r >= 0) theta = std::max(0.0, theta);
    }

    const bool boxed = std::isfinite(lo_[q]) && std::isfinite(up_[q]);
    const bool flip = boxed && (r < 0 || up_[q] - lo_[q] <= theta);
    if (flip) theta = up_[q] - lo_[q];
    if (r < 0 && !flip) {
      if (!phase1) return LpStatus::kUnbounded;
      absl::Status s = Recover();
      if (!s.ok()) return s;
      continue;
    }

    degenerate_run = theta <= kDegenerateStep ? degenerate_run + 1 : 0;
    if (theta != 0.0) {
      x_[q] += dir * theta;
      for (int p = 0; p < m_; ++p) {
        if (alpha[p] != 0.0) x_[head_[p]] -= dir * alpha[p] * theta;
      }
    }
    if (flip) {
      status_[q] = dir > 0.0 ? BasisStatus::kAtUpper : BasisStatus::kAtLower;
      x_[q] = dir > 0.0 ? up_[q] : lo_[q];
      continue;
    }
    const int leaving = head_[r];
    status_[leaving] =
        leave_upper ? BasisStatus::kAtUpper : BasisStatus::kAtLower;
    if (lo_[leaving] == up_[leaving]) status_[leaving] = BasisStatus::kAtLower;
    x_[leaving] = leave_upper ? up_[leaving] : lo_[leaving];
    Pivot(r, q, alpha);
  }
}

LpSolution SimplexEngine::Extract(LpStatus status) {
  LpSolution sol;
  sol.status = status;
  sol.iterations = iterations_;
  sol.basis.status = status_;
  sol.primal.resize(n_);
  for (int j = 0; j < n_; ++j) sol.primal[j] = x_[j] * col_scale_[j];
  sol.row_activity.assign(m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      sol.row_activity[row_index_[k]] += raw_value_[k] * sol.primal[j];
    }
  }
  sol.objective = 0.0;
  for (int j = 0; j < n_; ++j) sol.objective += raw_cost_[j] * sol.primal[j];
  sol.infeasibility = status == LpStatus::kOptimal ? 0.0 : Infeasibility();

  sol.row_duals.assign(m_, 0.0);
  sol.reduced_costs.assign(n_, 0.0);
  if (status == LpStatus::kOptimal && m_ > 0) {
    std::vector<double> y(m_);
    for (int p = 0; p < m_; ++p) y[p] = Cost(head_[p]);
    factor_.Btran(y);
    for (int i = 0; i < m_; ++i) sol.row_duals[i] = y[i] * row_scale_[i];
    for (int j = 0; j < n_; ++j) {
      sol.reduced_costs[j] =
          status_[j] == BasisStatus::kBasic
              ? 0.0
              : (cost_[j] - ColumnDot(j, y)) / col_scale_[j];
    }
  } else if (status == LpStatus::kOptimal) {
    sol.reduced_costs = raw_cost_;
  }
  return sol;
}

namespace {

std::vector<double> Lower(const MilpProblem& problem) {
  std::vector<double> v;
  for (const Variable& var : problem.variables) v.push_back(var.lower);
  return v;
}

std::vector<double> Upper(const MilpProblem& problem) {
  std::vector<double> v;
  for (const Variable& var : problem.variables) v.push_back(var.upper);
  return v;
}

double UnscaledViolation(const LpSolution& sol, std::span<const double> lower,
                         std::span<const double> upper,
                         const std::vector<double>& row_lower,
                         const std::vector<double>& row_upper) {
  double worst = 0.0;
  for (size_t j = 0; j < sol.primal.size(); ++j) {
    worst = std::max(worst, lower[j] - sol.primal[j]);
    worst = std::max(worst, sol.primal[j] - upper[j]);
  }
  for (size_t i = 0; i < sol.row_activity.size(); ++i) {
    worst = std::max(worst, row_lower[i] - sol.row_activity[i]);
    worst = std::max(worst, sol.row_activity[i] - row_upper[i]);
  }
  return worst;
}

absl::StatusOr<LpStatus> RunEngine(SimplexEngine& engine, bool warm) {
  if (warm && engine.options().dual) {
    absl::StatusOr<std::optional<LpStatus>> dual = engine.RunDual();
    if (!dual.ok()) return dual.status();
    if (dual->has_value()) return **dual;
  }
  return engine.RunPrimal(/*phase1_only=*/false);
}

}  // namespace

LpSolver::LpSolver(const MilpProblem& problem, LpOptions options)
    : engine_(std::make_unique<SimplexEngine>(problem, options)),
      lower_(Lower(problem)),
      upper_(Upper(problem)) {
  for (const Row& row : problem.rows) {
    row_lower_.push_back(row.sense == RowSense::kLessEqual ? -kInf : row.rhs);
    row_upper_.push_back(row.sense == RowSense::kGreaterEqual ? kInf
                                                              : row.rhs);
  }
}

LpSolver::~LpSolver() = default;
LpSolver::LpSolver(LpSolver&&) noexcept = default;
LpSolver& LpSolver::operator=(LpSolver&&) noexcept = default;

int LpSolver::num_variables() const { return engine_->n(); }
int LpSolver::num_rows() const { return engine_->m(); }

void LpSolver::set_objective_cutoff(double cutoff) {
  cutoff_ = cutoff;
  engine_->set_cutoff(cutoff);
}

absl::StatusOr<LpSolution> LpSolver::Solve(const LpBasis* hint) {
  return Solve(lower_, upper_, hint);
}

absl::StatusOr<LpSolution> LpSolver::Solve(std::span<const double> lower,
                                           std::span<const double> upper,
                                           const LpBasis* hint) {
  if (static_cast<int>(lower.size()) != engine_->n() ||
      static_cast<int>(upper.size()) != engine_->n()) {
    return absl::InvalidArgumentError("bound vectors have the wrong size");
  }
  engine_->SetBounds(lower, upper);
  engine_->InitBasis(hint);
  engine_->ResetIterations();
  absl::StatusOr<LpStatus> status = RunEngine(*engine_, hint != nullptr);
  if (!status.ok()) return status.status();
  LpSolution sol = engine_->Extract(*status);
  if (sol.status != LpStatus::kOptimal || !engine_->scaling() ||
      UnscaledViolation(sol, lower, upper, row_lower_, row_upper_) <=
          kUnscaledViolation) {
    return sol;
  }
  // Polish in unscaled space from the basis just found.
  const int64_t scaled_iterations = sol.iterations;
  engine_->SetScaling(false);
  engine_->SetBounds(lower, upper);
  engine_->InitBasis(&sol.basis);
  engine_->ResetIterations();
  engine_->set_cutoff(kInf);
  status = engine_->RunPrimal(/*phase1_only=*/false);
  engine_->set_cutoff(cutoff_);
  if (status.ok()) {
    sol = engine_->Extract(*status);
    sol.iterations += scaled_iterations;
  }
  engine_->SetScaling(true);
  if (!status.ok()) return status.status();
  return sol;
}

absl::StatusOr<Phase1Result> LpSolver::FindFeasibleBasis(
    std::span<const double> lower, std::span<const double> upper) {
  if (static_cast<int>(lower.size()) != engine_->n() ||
      static_cast<int>(upper.size()) != engine_->n()) {
    return absl::InvalidArgumentError("bound vectors have the wrong size");
  }
  engine_->SetBounds(lower, upper);
  engine_->InitBasis(nullptr);
  engine_->ResetIterations();
  absl::StatusOr<LpStatus> status = engine_->RunPrimal(/*phase1_only=*/true);
  if (!status.ok()) return status.status();
  const LpSolution sol = engine_->Extract(*status);
  Phase1Result result;
  result.feasible = *status == LpStatus::kOptimal;
  result.infeasibility = sol.infeasibility;
  result.primal = sol.primal;
  result.basis = sol.basis;
  result.iterations = sol.iterations;
  return result;
}

absl::StatusOr<LpSolution> SolveLp(const MilpProblem& problem,
                                   const LpOptions& options) {
  LpSolver solver(problem, options);
  return solver.Solve();
}

absl::StatusOr<Phase1Result> Phase1Feasibility(const MilpProblem& problem,
                                               const LpOptions& options) {
  LpSolver solver(problem, options);
  return solver.FindFeasibleBasis(Lower(problem), Upper(problem));
}

}  // namespace evac

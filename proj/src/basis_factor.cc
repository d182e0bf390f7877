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


#include "evac/basis_factor.h"

#include <algorithm>
#include <cmath>

namespace evac {
namespace {

// A row singleton is used only when its pivot is at least this fraction of
// the largest active entry in its column; otherwise the dense block decides.
constexpr double kSingletonThreshold = 1e-3;

}  // namespace

void BasisFactor::Clear() {
  kernel_size_ = 0;
  pivot_row_.clear();
  pivot_col_.clear();
  pivot_value_.clear();
  l_start_.assign(1, 0);
  l_index_.clear();
  l_value_.clear();
  u_start_.assign(1, 0);
  u_index_.clear();
  u_value_.clear();
  eta_row_.clear();
  eta_pivot_.clear();
  eta_start_.assign(1, 0);
  eta_index_.clear();
  eta_value_.clear();
}

void BasisFactor::AddPivot(int row, int col, double pivot) {
  pivot_row_.push_back(row);
  pivot_col_.push_back(col);
  pivot_value_.push_back(pivot);
  l_start_.push_back(static_cast<int>(l_index_.size()));
  u_start_.push_back(static_cast<int>(u_index_.size()));
}

std::vector<std::pair<int, int>> BasisFactor::Factorize(
    int m, std::span<const SparseColumn> columns, double pivot_tolerance) {
  Clear();
  m_ = m;
  work_.assign(m, 0.0);

  struct Entry {
    int other;
    double value;
  };
  std::vector<std::vector<Entry>> rows(m);
  std::vector<int> row_count(m, 0), col_count(m, 0);
  for (int p = 0; p < m; ++p) {
    const SparseColumn& col = columns[p];
    for (size_t k = 0; k < col.index.size(); ++k) {
      if (col.value[k] == 0.0) continue;
      rows[col.index[k]].push_back({p, col.value[k]});
      ++row_count[col.index[k]];
      ++col_count[p];
    }
  }
  std::vector<char> row_active(m, 1), col_active(m, 1);
  std::vector<int> col_stack, row_stack;
  for (int p = m - 1; p >= 0; --p) {
    if (col_count[p] == 1) col_stack.push_back(p);
  }
  for (int i = m - 1; i >= 0; --i) {
    if (row_count[i] == 1) row_stack.push_back(i);
  }

  while (!col_stack.empty() || !row_stack.empty()) {
    if (!col_stack.empty()) {
      const int p = col_stack.back();
      col_stack.pop_back();
      if (!col_active[p] || col_count[p] != 1) continue;
      const SparseColumn& col = columns[p];
      int r = -1;
      double a = 0.0;
      for (size_t k = 0; k < col.index.size(); ++k) {
        if (row_active[col.index[k]] && col.value[k] != 0.0) {
          r = col.index[k];
          a = col.value[k];
          break;
        }
      }
      if (r < 0 || std::abs(a) < pivot_tolerance) continue;
      for (const Entry& e : rows[r]) {
        if (!col_active[e.other] || e.other == p) continue;
        u_index_.push_back(e.other);
        u_value_.push_back(e.value);
        if (--col_count[e.other] == 1) col_stack.push_back(e.other);
      }
      row_active[r] = 0;
      col_active[p] = 0;
      AddPivot(r, p, a);
      continue;
    }
    const int i = row_stack.back();
    row_stack.pop_back();
    if (!row_active[i] || row_count[i] != 1) continue;
    int p = -1;
    double a = 0.0;
    for (const Entry& e : rows[i]) {
      if (col_active[e.other]) {
        p = e.other;
        a = e.value;
        break;
      }
    }
    if (p < 0 || std::abs(a) < pivot_tolerance) continue;
    const SparseColumn& col = columns[p];
    double largest = 0.0;
    for (size_t k = 0; k < col.index.size(); ++k) {
      if (row_active[col.index[k]]) {
        largest = std::max(largest, std::abs(col.value[k]));
      }
    }
    if (std::abs(a) < kSingletonThreshold * largest) continue;
    for (size_t k = 0; k < col.index.size(); ++k) {
      const int r = col.index[k];
      if (!row_active[r] || r == i || col.value[k] == 0.0) continue;
      l_index_.push_back(r);
      l_value_.push_back(col.value[k] / a);
      if (--row_count[r] == 1) row_stack.push_back(r);
    }
    row_active[i] = 0;
    col_active[p] = 0;
    AddPivot(i, p, a);
  }

  // Dense elimination of what is left.
  std::vector<int> krows, kcols;
  std::vector<int> local(m, -1);
  for (int i = 0; i < m; ++i) {
    if (row_active[i]) {
      local[i] = static_cast<int>(krows.size());
      krows.push_back(i);
    }
  }
  for (int p = 0; p < m; ++p) {
    if (col_active[p]) kcols.push_back(p);
  }
  const int s = static_cast<int>(kcols.size());
  kernel_size_ = s;
  std::vector<std::pair<int, int>> unpivoted;
  if (s == 0) return unpivoted;
  std::sort(kcols.begin(), kcols.end(), [&](int a, int b) {
    return col_count[a] != col_count[b] ? col_count[a] < col_count[b] : a < b;
  });
  std::vector<double> dense(static_cast<size_t>(s) * s, 0.0);
  auto at = [&](int r, int c) -> double& {
    return dense[static_cast<size_t>(r) * s + c];
  };
  for (int c = 0; c < s; ++c) {
    const SparseColumn& col = columns[kcols[c]];
    for (size_t k = 0; k < col.index.size(); ++k) {
      const int r = local[col.index[k]];
      if (r >= 0) at(r, c) += col.value[k];
    }
  }
  std::vector<char> row_done(s, 0);
  std::vector<int> bad_cols;
  for (int c = 0; c < s; ++c) {
    int best = -1;
    double best_abs = pivot_tolerance;
    for (int r = 0; r < s; ++r) {
      if (!row_done[r] && std::abs(at(r, c)) >= best_abs) {
        best_abs = std::abs(at(r, c));
        best = r;
      }
    }
    if (best < 0) {
      bad_cols.push_back(kcols[c]);
      continue;
    }
    const double pivot = at(best, c);
    for (int r = 0; r < s; ++r) {
      if (row_done[r] || r == best || at(r, c) == 0.0) continue;
      const double l = at(r, c) / pivot;
      l_index_.push_back(krows[r]);
      l_value_.push_back(l);
      for (int c2 = c + 1; c2 < s; ++c2) {
        const double u = at(best, c2);
        if (u != 0.0) at(r, c2) -= l * u;
      }
      at(r, c) = 0.0;
    }
    for (int c2 = c + 1; c2 < s; ++c2) {
      if (at(best, c2) != 0.0) {
        u_index_.push_back(kcols[c2]);
        u_value_.push_back(at(best, c2));
      }
    }
    row_done[best] = 1;
    AddPivot(krows[best], kcols[c], pivot);
  }
  if (bad_cols.empty()) return unpivoted;
  size_t next = 0;
  for (int r = 0; r < s; ++r) {
    if (!row_done[r]) unpivoted.emplace_back(bad_cols[next++], krows[r]);
  }
  return unpivoted;
}

void BasisFactor::Ftran(std::vector<double>& v) const {
  const int steps = static_cast<int>(pivot_row_.size());
  for (int k = 0; k < steps; ++k) {
    const int begin = l_start_[k], end = l_start_[k + 1];
    if (begin == end) continue;
    const double br = v[pivot_row_[k]];
    if (br == 0.0) continue;
    for (int e = begin; e < end; ++e) v[l_index_[e]] -= l_value_[e] * br;
  }
  std::vector<double>& x = work_;
  for (int k = steps - 1; k >= 0; --k) {
    double sum = v[pivot_row_[k]];
    for (int e = u_start_[k]; e < u_start_[k + 1]; ++e) {
      sum -= u_value_[e] * x[u_index_[e]];
    }
    x[pivot_col_[k]] = sum / pivot_value_[k];
  }
  v.swap(x);
  for (size_t k = 0; k < eta_row_.size(); ++k) {
    const int r = eta_row_[k];
    const double pr = v[r] / eta_pivot_[k];
    if (pr != 0.0) {
      for (int e = eta_start_[k]; e < eta_start_[k + 1]; ++e) {
        v[eta_index_[e]] -= eta_value_[e] * pr;
      }
    }
    v[r] = pr;
  }
}

void BasisFactor::Btran(std::vector<double>& v) const {
  for (int k = static_cast<int>(eta_row_.size()) - 1; k >= 0; --k) {
    const int r = eta_row_[k];
    double sum = v[r];
    for (int e = eta_start_[k]; e < eta_start_[k + 1]; ++e) {
      sum -= eta_value_[e] * v[eta_index_[e]];
    }
    v[r] = sum / eta_pivot_[k];
  }
  const int steps = static_cast<int>(pivot_row_.size());
  std::vector<double>& w = work_;
  for (int k = 0; k < steps; ++k) {
    const double wr = v[pivot_col_[k]] / pivot_value_[k];
    w[pivot_row_[k]] = wr;
    if (wr == 0.0) continue;
    for (int e = u_start_[k]; e < u_start_[k + 1]; ++e) {
      v[u_index_[e]] -= u_value_[e] * wr;
    }
  }
  for (int k = steps - 1; k >= 0; --k) {
    double sum = 0.0;
    for (int e = l_start_[k]; e < l_start_[k + 1]; ++e) {
      sum += l_value_[e] * w[l_index_[e]];
    }
    w[pivot_row_[k]] -= sum;
  }
  v.swap(w);
}

void BasisFactor::Update(int r, std::span<const double> alpha) {
  eta_row_.push_back(r);
  eta_pivot_.push_back(alpha[r]);
  for (int p = 0; p < m_; ++p) {
    if (p != r && alpha[p] != 0.0) {
      eta_index_.push_back(p);
      eta_value_.push_back(alpha[p]);
    }
  }
  eta_start_.push_back(static_cast<int>(eta_index_.size()));
}

}  // namespace evac

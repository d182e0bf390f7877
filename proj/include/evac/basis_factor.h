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


// Sparse LU factorization of a simplex basis with product-form updates.
//
// Singleton columns and rows are pivoted first (no fill); whatever remains
// is eliminated as a dense block with partial pivoting. Columns that cannot
// be pivoted are reported so the caller can swap in logical columns.

#ifndef EVAC_BASIS_FACTOR_H_
#define EVAC_BASIS_FACTOR_H_

#include <span>
#include <utility>
#include <vector>

namespace evac {

struct SparseColumn {
  std::vector<int> index;
  std::vector<double> value;
};

class BasisFactor {
 public:
  // Factorizes the m x m matrix whose column p is columns[p]. Returns the
  // (position, row) pairs left unpivoted; the factorization is usable only
  // when the result is empty.
  std::vector<std::pair<int, int>> Factorize(
      int m, std::span<const SparseColumn> columns,
      double pivot_tolerance = 1e-11);

  // Solves B x = v in place: v is indexed by row on input and by basis
  // position on output.
  void Ftran(std::vector<double>& v) const;
  // Solves B^T y = v in place: position-indexed in, row-indexed out.
  void Btran(std::vector<double>& v) const;

  // Records that position r now holds a column whose Ftran was alpha.
  void Update(int r, std::span<const double> alpha);

  int num_updates() const { return static_cast<int>(eta_row_.size()); }
  int kernel_size() const { return kernel_size_; }
  // Nonzeros in L and U, pivots excluded.
  int factor_nonzeros() const {
    return static_cast<int>(l_index_.size() + u_index_.size());
  }

 private:
  void Clear();
  void AddPivot(int row, int col, double pivot);

  int m_ = 0;
  int kernel_size_ = 0;
  std::vector<int> pivot_row_;
  std::vector<int> pivot_col_;
  std::vector<double> pivot_value_;
  // Multipliers applied to other rows, per pivot.
  std::vector<int> l_start_;
  std::vector<int> l_index_;
  std::vector<double> l_value_;
  // Entries of the pivot row in later pivot columns, per pivot.
  std::vector<int> u_start_;
  std::vector<int> u_index_;
  std::vector<double> u_value_;

  std::vector<int> eta_row_;
  std::vector<double> eta_pivot_;
  std::vector<int> eta_start_;
  std::vector<int> eta_index_;
  std::vector<double> eta_value_;

  mutable std::vector<double> work_;
};

}  // namespace evac

#endif  // EVAC_BASIS_FACTOR_H_

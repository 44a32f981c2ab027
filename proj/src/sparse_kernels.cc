// Copyright 2026 The gridpdlp Authors.
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

#include "gridpdlp/sparse_kernels.h"

#include <algorithm>
#include <cmath>

namespace gridpdlp {

void SpMV(const SparseMatrix& a, std::span<const double> x,
          std::span<double> out) {
  GRIDPDLP_CHECK(static_cast<int64_t>(x.size()) == a.num_cols,
                 "SpMV: x has the wrong length");
  GRIDPDLP_CHECK(static_cast<int64_t>(out.size()) == a.num_rows,
                 "SpMV: output has the wrong length");
  const int64_t* offsets = a.row_offsets.data();
  const int64_t* cols = a.col_indices.data();
  const double* vals = a.values.data();
  for (int64_t r = 0; r < a.num_rows; ++r) {
    double sum = 0.0;
    for (int64_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      sum += vals[k] * x[cols[k]];
    }
    out[r] = sum;
  }
}

std::vector<double> SpMV(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> out(a.num_rows);
  SpMV(a, x, out);
  return out;
}

void SpMVTranspose(const SparseMatrix& a_transpose, std::span<const double> y,
                   std::span<double> out) {
  GRIDPDLP_CHECK(static_cast<int64_t>(y.size()) == a_transpose.num_cols,
                 "SpMVTranspose: y has the wrong length");
  SpMV(a_transpose, y, out);
}

std::vector<double> SpMVTranspose(const SparseMatrix& a_transpose,
                                  std::span<const double> y) {
  std::vector<double> out(a_transpose.num_rows);
  SpMVTranspose(a_transpose, y, out);
  return out;
}

SparseMatrix Transpose(const SparseMatrix& a) {
  SparseMatrix t;
  t.num_rows = a.num_cols;
  t.num_cols = a.num_rows;
  t.row_offsets.assign(t.num_rows + 1, 0);
  for (int64_t c : a.col_indices) ++t.row_offsets[c + 1];
  for (int64_t r = 0; r < t.num_rows; ++r) {
    t.row_offsets[r + 1] += t.row_offsets[r];
  }
  t.col_indices.resize(a.nnz());
  t.values.resize(a.nnz());
  std::vector<int64_t> next(t.row_offsets.begin(), t.row_offsets.end() - 1);
  // Rows of A are visited in ascending order, so each transposed row comes
  // out sorted.
  for (int64_t r = 0; r < a.num_rows; ++r) {
    for (int64_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      const int64_t slot = next[a.col_indices[k]]++;
      t.col_indices[slot] = r;
      t.values[slot] = a.values[k];
    }
  }
  return t;
}

SparseMatrix SliceBlock(const SparseMatrix& a, IndexRange rows,
                        IndexRange cols) {
  GRIDPDLP_CHECK(rows.begin >= 0 && rows.begin <= rows.end &&
                     rows.end <= a.num_rows,
                 "SliceBlock: row range out of bounds");
  GRIDPDLP_CHECK(cols.begin >= 0 && cols.begin <= cols.end &&
                     cols.end <= a.num_cols,
                 "SliceBlock: column range out of bounds");
  SparseMatrix block;
  block.num_rows = rows.size();
  block.num_cols = cols.size();
  block.row_offsets.assign(block.num_rows + 1, 0);
  for (int64_t r = rows.begin; r < rows.end; ++r) {
    const auto first = a.col_indices.begin() + a.row_offsets[r];
    const auto last = a.col_indices.begin() + a.row_offsets[r + 1];
    auto it = std::lower_bound(first, last, cols.begin);
    for (; it != last && *it < cols.end; ++it) {
      block.col_indices.push_back(*it - cols.begin);
      block.values.push_back(a.values[it - a.col_indices.begin()]);
    }
    block.row_offsets[r - rows.begin + 1] = block.nnz();
  }
  return block;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  GRIDPDLP_CHECK(a.size() == b.size(), "Dot: length mismatch");
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double SquaredNorm(std::span<const double> a) {
  double sum = 0.0;
  for (double v : a) sum += v * v;
  return sum;
}

double PowerIterationStart(int64_t original_column) {
  // splitmix64 finalizer mapped to [0.5, 1.5).
  uint64_t z = static_cast<uint64_t>(original_column) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return 0.5 + static_cast<double>(z >> 11) * 0x1.0p-53;
}

double EstimateSpectralNorm(const SparseMatrix& a, int iterations,
                            std::span<const int64_t> original_columns) {
  GRIDPDLP_CHECK(iterations >= 1, "EstimateSpectralNorm: iterations >= 1");
  GRIDPDLP_CHECK(original_columns.empty() ||
                     static_cast<int64_t>(original_columns.size()) == a.num_cols,
                 "EstimateSpectralNorm: original_columns has the wrong length");
  std::vector<double> v(a.num_cols);
  for (int64_t j = 0; j < a.num_cols; ++j) {
    v[j] = PowerIterationStart(original_columns.empty() ? j
                                                        : original_columns[j]);
  }
  const double v_norm = std::sqrt(SquaredNorm(v));
  if (v_norm == 0.0) return 0.0;
  for (double& e : v) e /= v_norm;
  const SparseMatrix at = Transpose(a);
  std::vector<double> w(a.num_rows);
  std::vector<double> u(a.num_cols);
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    SpMV(a, v, w);
    estimate = std::max(estimate, std::sqrt(SquaredNorm(w)));
    if (estimate == 0.0) return 0.0;
    SpMV(at, w, u);
    const double u_norm = std::sqrt(SquaredNorm(u));
    if (u_norm == 0.0) break;
    for (int64_t j = 0; j < a.num_cols; ++j) v[j] = u[j] / u_norm;
  }
  return estimate;
}

}  // namespace gridpdlp

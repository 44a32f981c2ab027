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

// Sequential FP64 kernels shared by every device worker. All reductions run in
// ascending index order so that results are reproducible bit for bit.

#ifndef GRIDPDLP_SPARSE_KERNELS_H_
#define GRIDPDLP_SPARSE_KERNELS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "gridpdlp/lp_model.h"

namespace gridpdlp {

struct IndexRange {
  int64_t begin = 0;
  int64_t end = 0;
  int64_t size() const { return end - begin; }
};

// out = A x. `out` must have A.num_rows entries.
void SpMV(const SparseMatrix& a, std::span<const double> x,
          std::span<double> out);
std::vector<double> SpMV(const SparseMatrix& a, std::span<const double> x);

// out = A^T y, computed as a row-major product over the materialized
// transpose `a_transpose` (see Transpose()).
void SpMVTranspose(const SparseMatrix& a_transpose, std::span<const double> y,
                   std::span<double> out);
std::vector<double> SpMVTranspose(const SparseMatrix& a_transpose,
                                  std::span<const double> y);

SparseMatrix Transpose(const SparseMatrix& a);

// Submatrix [rows) x [cols) re-indexed to local coordinates.
SparseMatrix SliceBlock(const SparseMatrix& a, IndexRange rows,
                        IndexRange cols);

double Dot(std::span<const double> a, std::span<const double> b);
double SquaredNorm(std::span<const double> a);

// ||A||_2 by power iteration on A^T A. The start vector is
// PowerIterationStart(original_columns[j]) (or of j when `original_columns` is
// empty). Single-device counterpart of the estimate in spectral_norm.h; the
// returned value is the largest ||A v|| seen with ||v|| = 1, so it never
// exceeds the true norm.
double EstimateSpectralNorm(const SparseMatrix& a, int iterations,
                            std::span<const int64_t> original_columns = {});

// Start vector entry for a column, a function of the original column index
// only so that every layout of the same problem starts from the same vector.
double PowerIterationStart(int64_t original_column);

}  // namespace gridpdlp

#endif  // GRIDPDLP_SPARSE_KERNELS_H_

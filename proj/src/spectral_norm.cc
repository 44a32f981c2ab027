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

#include "gridpdlp/spectral_norm.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gridpdlp/sparse_kernels.h"

namespace gridpdlp {

double EstimateSpectralNorm(const LocalBlock& block, Communicator& comm,
                            int iterations) {
  GRIDPDLP_CHECK(iterations >= 1, "EstimateSpectralNorm: iterations >= 1");
  const int64_t n = block.num_cols();
  std::vector<double> v(n);
  for (int64_t j = 0; j < n; ++j) v[j] = PowerIterationStart(block.original_cols[j]);
  // v[j] is replicated down grid column j; summing across C covers all of x.
  const double v_norm = std::sqrt(comm.AllReduceSum(Axis::kColumn, SquaredNorm(v)));
  if (v_norm == 0.0) return 0.0;
  for (double& e : v) e /= v_norm;

  std::vector<double> w(block.num_rows());
  std::vector<double> u(n);
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    SpMV(block.a, v, w);
    comm.AllReduceSum(Axis::kColumn, w);
    estimate = std::max(
        estimate, std::sqrt(comm.AllReduceSum(Axis::kRow, SquaredNorm(w))));
    if (estimate == 0.0) return 0.0;
    SpMV(block.a_transpose, w, u);
    comm.AllReduceSum(Axis::kRow, u);
    const double u_norm = std::sqrt(comm.AllReduceSum(Axis::kColumn, SquaredNorm(u)));
    if (u_norm == 0.0) break;
    for (int64_t j = 0; j < n; ++j) v[j] = u[j] / u_norm;
  }
  return estimate;
}

}  // namespace gridpdlp

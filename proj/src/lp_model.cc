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

#include "gridpdlp/lp_model.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gridpdlp {

void SparseMatrix::Validate() const {
  GRIDPDLP_CHECK(num_rows >= 0 && num_cols >= 0, "negative dimension");
  GRIDPDLP_CHECK(static_cast<int64_t>(row_offsets.size()) == num_rows + 1,
                 "row_offsets must have num_rows + 1 entries");
  GRIDPDLP_CHECK(row_offsets.front() == 0, "row_offsets[0] must be 0");
  GRIDPDLP_CHECK(row_offsets.back() == nnz(), "row_offsets[m] must equal nnz");
  GRIDPDLP_CHECK(col_indices.size() == values.size(),
                 "col_indices and values differ in length");
  for (int64_t r = 0; r < num_rows; ++r) {
    GRIDPDLP_CHECK(row_offsets[r] <= row_offsets[r + 1],
                   "row_offsets must be non-decreasing");
    for (int64_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      GRIDPDLP_CHECK(col_indices[k] >= 0 && col_indices[k] < num_cols,
                     "column index out of range");
      GRIDPDLP_CHECK(k == row_offsets[r] || col_indices[k - 1] < col_indices[k],
                     "column indices must be strictly increasing in a row");
      GRIDPDLP_CHECK(std::isfinite(values[k]), "matrix entry is not finite");
    }
  }
}

SparseMatrix FromTriplets(int64_t num_rows, int64_t num_cols,
                          std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  SparseMatrix m;
  m.num_rows = num_rows;
  m.num_cols = num_cols;
  m.row_offsets.assign(num_rows + 1, 0);
  size_t k = 0;
  while (k < triplets.size()) {
    const Triplet& t = triplets[k];
    GRIDPDLP_CHECK(t.row >= 0 && t.row < num_rows && t.col >= 0 &&
                       t.col < num_cols,
                   "triplet index out of range");
    double sum = 0.0;
    size_t end = k;
    while (end < triplets.size() && triplets[end].row == t.row &&
           triplets[end].col == t.col) {
      sum += triplets[end].value;
      ++end;
    }
    if (sum != 0.0) {
      m.col_indices.push_back(t.col);
      m.values.push_back(sum);
      ++m.row_offsets[t.row + 1];
    }
    k = end;
  }
  for (int64_t r = 0; r < num_rows; ++r) {
    m.row_offsets[r + 1] += m.row_offsets[r];
  }
  return m;
}

std::vector<std::vector<double>> ToDense(const SparseMatrix& matrix) {
  std::vector<std::vector<double>> dense(
      matrix.num_rows, std::vector<double>(matrix.num_cols, 0.0));
  for (int64_t r = 0; r < matrix.num_rows; ++r) {
    for (int64_t k = matrix.row_offsets[r]; k < matrix.row_offsets[r + 1]; ++k) {
      dense[r][matrix.col_indices[k]] = matrix.values[k];
    }
  }
  return dense;
}

SparseMatrix FromDense(const std::vector<std::vector<double>>& dense) {
  SparseMatrix m;
  m.num_rows = static_cast<int64_t>(dense.size());
  m.num_cols = dense.empty() ? 0 : static_cast<int64_t>(dense.front().size());
  m.row_offsets.assign(m.num_rows + 1, 0);
  for (int64_t r = 0; r < m.num_rows; ++r) {
    GRIDPDLP_CHECK(static_cast<int64_t>(dense[r].size()) == m.num_cols,
                   "ragged dense matrix");
    for (int64_t c = 0; c < m.num_cols; ++c) {
      if (dense[r][c] != 0.0) {
        m.col_indices.push_back(c);
        m.values.push_back(dense[r][c]);
      }
    }
    m.row_offsets[r + 1] = m.nnz();
  }
  return m;
}

namespace {

void CheckBoundPairs(const std::vector<double>& lower,
                     const std::vector<double>& upper, const char* what) {
  for (size_t i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i] ||
        lower[i] == kInfinity || upper[i] == -kInfinity) {
      std::ostringstream msg;
      msg << what << " bounds invalid at index " << i << ": [" << lower[i]
          << ", " << upper[i] << "]";
      throw std::invalid_argument(msg.str());
    }
  }
}

}  // namespace

void LpProblem::Validate() const {
  try {
    matrix.Validate();
  } catch (const ContractViolation& e) {
    throw std::invalid_argument(std::string("constraint matrix: ") + e.what());
  }
  const auto m = static_cast<size_t>(num_constraints());
  const auto n = static_cast<size_t>(num_variables());
  if (objective.size() != n || var_lower.size() != n || var_upper.size() != n) {
    throw std::invalid_argument("variable vectors do not match column count");
  }
  if (con_lower.size() != m || con_upper.size() != m) {
    throw std::invalid_argument("constraint vectors do not match row count");
  }
  if (!row_names.empty() && row_names.size() != m) {
    throw std::invalid_argument("row_names has the wrong length");
  }
  if (!col_names.empty() && col_names.size() != n) {
    throw std::invalid_argument("col_names has the wrong length");
  }
  for (double c : objective) {
    if (!std::isfinite(c)) throw std::invalid_argument("objective not finite");
  }
  if (!std::isfinite(objective_constant)) {
    throw std::invalid_argument("objective constant not finite");
  }
  CheckBoundPairs(var_lower, var_upper, "variable");
  CheckBoundPairs(con_lower, con_upper, "constraint");
}

double ObjectiveValue(const LpProblem& problem, std::span<const double> x) {
  GRIDPDLP_CHECK(static_cast<int64_t>(x.size()) == problem.num_variables(),
                 "ObjectiveValue: x has the wrong length");
  double sum = 0.0;
  for (size_t j = 0; j < x.size(); ++j) sum += problem.objective[j] * x[j];
  return sum + problem.objective_constant;
}

double ReportedObjective(const LpProblem& problem, double internal_objective) {
  return problem.maximize ? -internal_objective : internal_objective;
}

BoundClass ClassifyBounds(double lower, double upper) {
  const bool has_lower = std::isfinite(lower);
  const bool has_upper = std::isfinite(upper);
  if (has_lower && has_upper) return BoundClass::kBoxed;
  if (has_lower) return BoundClass::kLowerOnly;
  if (has_upper) return BoundClass::kUpperOnly;
  return BoundClass::kFree;
}

}  // namespace gridpdlp

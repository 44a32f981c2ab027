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

#ifndef GRIDPDLP_LP_MODEL_H_
#define GRIDPDLP_LP_MODEL_H_

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridpdlp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Raised when a caller breaks a documented precondition (dimension mismatch,
// out-of-range index, ...). These are programming errors, not data errors.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

#define GRIDPDLP_CHECK(cond, msg)                                   \
  do {                                                              \
    if (!(cond)) throw ::gridpdlp::ContractViolation(std::string(msg)); \
  } while (false)

// Compressed sparse row storage. Column indices are strictly increasing
// within each row.
struct SparseMatrix {
  int64_t num_rows = 0;
  int64_t num_cols = 0;
  std::vector<int64_t> row_offsets{0};
  std::vector<int64_t> col_indices;
  std::vector<double> values;

  int64_t nnz() const { return static_cast<int64_t>(values.size()); }
  int64_t RowNnz(int64_t row) const {
    return row_offsets[row + 1] - row_offsets[row];
  }

  // Throws ContractViolation if any CSR invariant is broken.
  void Validate() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;
};

struct Triplet {
  int64_t row;
  int64_t col;
  double value;
};

// Builds a CSR matrix from unordered triplets. Duplicate (row, col) entries are
// summed; entries that sum to exactly zero are dropped.
SparseMatrix FromTriplets(int64_t num_rows, int64_t num_cols,
                          std::vector<Triplet> triplets);

// Dense row-major view, for tests and small diagnostics.
std::vector<std::vector<double>> ToDense(const SparseMatrix& matrix);
SparseMatrix FromDense(const std::vector<std::vector<double>>& dense);

// min c'x + objective_constant  s.t.  con_lower <= Ax <= con_upper,
//                                     var_lower <= x  <= var_upper.
// Infinite bounds are IEEE +-infinity. A maximization input is stored in
// negated form with `maximize` set; see ReportedObjective().
struct LpProblem {
  SparseMatrix matrix;
  std::vector<double> objective;
  double objective_constant = 0.0;
  std::vector<double> var_lower;
  std::vector<double> var_upper;
  std::vector<double> con_lower;
  std::vector<double> con_upper;
  bool maximize = false;

  // Optional; empty or of matching length.
  std::string name;
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;

  int64_t num_constraints() const { return matrix.num_rows; }
  int64_t num_variables() const { return matrix.num_cols; }

  // Throws std::invalid_argument describing the first broken invariant.
  void Validate() const;
};

// c'x + objective_constant of the stored (minimization) problem.
double ObjectiveValue(const LpProblem& problem, std::span<const double> x);

// Objective in the sense of the original input (negated back for max).
double ReportedObjective(const LpProblem& problem, double internal_objective);

// Sign structure of a dual multiplier implied by a bound pair.
enum class BoundClass {
  kFree,        // (-inf, +inf): multiplier fixed at 0
  kUpperOnly,   // (-inf, u]: multiplier <= 0
  kLowerOnly,   // [l, +inf): multiplier >= 0
  kBoxed,       // both finite (includes equality): multiplier unrestricted
};

BoundClass ClassifyBounds(double lower, double upper);

}  // namespace gridpdlp

#endif  // GRIDPDLP_LP_MODEL_H_

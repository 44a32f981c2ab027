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

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gridpdlp/mps_io.h"

namespace gridpdlp {
namespace {

std::string Num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::string WriteMps(const LpProblem& problem) {
  problem.Validate();
  const int64_t m = problem.num_constraints();
  const int64_t n = problem.num_variables();
  auto row_name = [&](int64_t i) {
    return problem.row_names.empty() ? fmt::format("R{}", i)
                                     : problem.row_names[i];
  };
  auto col_name = [&](int64_t j) {
    return problem.col_names.empty() ? fmt::format("C{}", j)
                                     : problem.col_names[j];
  };
  const double sign = problem.maximize ? -1.0 : 1.0;
  std::string objective_row = "OBJ";
  while (std::find(problem.row_names.begin(), problem.row_names.end(),
                   objective_row) != problem.row_names.end()) {
    objective_row += "_";
  }

  std::string out;
  out += "NAME " + (problem.name.empty() ? std::string("gridpdlp") : problem.name) + "\n";
  if (problem.maximize) out += "OBJSENSE\n    MAX\n";
  out += "ROWS\n N  " + objective_row + "\n";
  for (int64_t i = 0; i < m; ++i) {
    const double lo = problem.con_lower[i];
    const double up = problem.con_upper[i];
    const char* type = "N";
    if (lo == up) {
      type = "E";
    } else if (std::isfinite(lo)) {
      type = "G";
    } else if (std::isfinite(up)) {
      type = "L";
    }
    out += fmt::format(" {}  {}\n", type, row_name(i));
  }

  // Column-major traversal needs the transpose of the CSR layout.
  std::vector<std::vector<std::pair<int64_t, double>>> columns(n);
  const SparseMatrix& a = problem.matrix;
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      columns[a.col_indices[k]].emplace_back(i, a.values[k]);
    }
  }
  out += "COLUMNS\n";
  for (int64_t j = 0; j < n; ++j) {
    // Every column is written at least once so that it survives re-reading.
    out += fmt::format("    {}  {}  {}\n", col_name(j), objective_row,
                       Num(sign * problem.objective[j]));
    for (const auto& [i, v] : columns[j]) {
      out += fmt::format("    {}  {}  {}\n", col_name(j), row_name(i), Num(v));
    }
  }

  out += "RHS\n";
  if (problem.objective_constant != 0.0) {
    out += fmt::format("    RHS  {}  {}\n", objective_row,
                       Num(-sign * problem.objective_constant));
  }
  std::string ranges;
  for (int64_t i = 0; i < m; ++i) {
    const double lo = problem.con_lower[i];
    const double up = problem.con_upper[i];
    double rhs = 0.0;
    if (lo == up || std::isfinite(lo)) {
      rhs = lo;
    } else if (std::isfinite(up)) {
      rhs = up;
    }
    if (rhs != 0.0) out += fmt::format("    RHS  {}  {}\n", row_name(i), Num(rhs));
    if (lo != up && std::isfinite(lo) && std::isfinite(up)) {
      ranges += fmt::format("    RNG  {}  {}\n", row_name(i), Num(up - lo));
    }
  }
  if (!ranges.empty()) out += "RANGES\n" + ranges;

  out += "BOUNDS\n";
  for (int64_t j = 0; j < n; ++j) {
    const double lo = problem.var_lower[j];
    const double up = problem.var_upper[j];
    const std::string name = col_name(j);
    if (lo == up) {
      out += fmt::format(" FX BND  {}  {}\n", name, Num(lo));
      continue;
    }
    if (lo == -kInfinity && up == kInfinity) {
      out += fmt::format(" FR BND  {}\n", name);
      continue;
    }
    if (lo == -kInfinity) {
      out += fmt::format(" MI BND  {}\n", name);
    } else if (lo != 0.0) {
      out += fmt::format(" LO BND  {}  {}\n", name, Num(lo));
    }
    if (up != kInfinity) out += fmt::format(" UP BND  {}  {}\n", name, Num(up));
  }
  out += "ENDATA\n";
  return out;
}

}  // namespace gridpdlp

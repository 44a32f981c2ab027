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

// Seeded synthetic LP instances with controlled sparsity structure.

#ifndef GRIDPDLP_GENERATORS_H_
#define GRIDPDLP_GENERATORS_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gridpdlp/lp_model.h"

namespace gridpdlp {

enum class GeneratorKind {
  kBlockDiagonal,
  kStaircase,
  kUniformRandom,
  kBoxKnownOptimum,
};

const char* ToString(GeneratorKind kind);
std::optional<GeneratorKind> ParseGeneratorKind(std::string_view s);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kUniformRandom;
  // uniform_random / box_known_optimum: the matrix shape.
  int64_t m = 0;
  int64_t n = 0;
  // Total nonzeros to aim for; 0 picks 10% of the structural area. Rows and
  // columns that would come out empty get one entry, so the result may
  // exceed the target slightly.
  int64_t nnz_target = 0;
  // block_diagonal / staircase: num_blocks blocks of block_rows x block_cols.
  int64_t num_blocks = 0;
  int64_t block_rows = 0;
  int64_t block_cols = 0;
  // staircase: extra columns each row block shares with the next one.
  int64_t overlap = 0;
  uint64_t seed = 0;
};

struct GeneratedInstance {
  LpProblem problem;
  // Point strictly inside the variable box that satisfies every row.
  std::vector<double> feasible_point;
  // Set for box_known_optimum.
  std::optional<double> known_objective;
};

// Throws std::invalid_argument for inconsistent specs (non-positive sizes,
// nnz_target above the structural area, ...).
GeneratedInstance Generate(const GeneratorSpec& spec);

}  // namespace gridpdlp

#endif  // GRIDPDLP_GENERATORS_H_

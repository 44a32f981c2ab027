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

// Single-device solver with no communicator, used as an equivalence oracle
// for the grid solver. It applies the same row/column permutation as a 1x1
// layout and performs the floating-point operations in the same order, so a
// 1x1 Solve() reproduces it bit for bit.

#ifndef GRIDPDLP_REFERENCE_SOLVER_H_
#define GRIDPDLP_REFERENCE_SOLVER_H_

#include <span>

#include "gridpdlp/lp_model.h"
#include "gridpdlp/pdhg_engine.h"
#include "gridpdlp/solver.h"

namespace gridpdlp {

// Grid, partition and backend fields of `config` are ignored; the
// permutation strategy, block size and seed are honoured.
SolveResult ReferenceSolve(const LpProblem& problem, const SolverConfig& config);

// KKT residuals of (x, y) on the whole problem, without any partitioning.
KktReport EvaluateKktDense(const LpProblem& problem, std::span<const double> x,
                           std::span<const double> y, const StepSizes& step);

}  // namespace gridpdlp

#endif  // GRIDPDLP_REFERENCE_SOLVER_H_

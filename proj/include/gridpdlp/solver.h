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

#ifndef GRIDPDLP_SOLVER_H_
#define GRIDPDLP_SOLVER_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gridpdlp/comm.h"
#include "gridpdlp/lp_model.h"
#include "gridpdlp/partition.h"
#include "gridpdlp/pdhg_engine.h"

namespace gridpdlp {

struct SolverConfig {
  // Layout.
  int num_procs = 1;
  std::optional<GridTopology> grid;
  PermutationStrategy permutation = PermutationStrategy::kBlockRandom;
  PartitionStrategy partition = PartitionStrategy::kNnz;
  int64_t block_size = kDefaultBlockSize;
  uint64_t seed = 0;

  // Algorithm and termination.
  EngineConfig engine;

  // Backend.
  ExecutionMode execution = ExecutionMode::kFibers;
  std::chrono::milliseconds comm_timeout{60000};

  LayoutOptions layout_options() const;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kIterationLimit;
  std::vector<double> x;  // original variable order
  std::vector<double> y;  // original constraint order
  KktReport kkt;
  double objective = 0.0;  // in the problem's own sense (see ReportedObjective)
  int64_t iterations = 0;
  int64_t restarts = 0;
  double wall_seconds = 0.0;
  double spectral_norm = 0.0;
  StepSizes final_step;
  LayoutSummary layout;
  // Per device, row-major. Setup covers the spectral-norm estimate and the
  // normalizers; loop covers everything after.
  std::vector<CommCounters> setup_counters;
  std::vector<CommCounters> loop_counters;
  // Global iterates after each of the first `engine.record_iterates`
  // iterations, in original order.
  std::vector<std::vector<double>> x_trace;
  std::vector<std::vector<double>> y_trace;
};

// Validates the problem, builds the layout, runs one worker per device and
// gathers the solution. Layout and data errors throw before any worker
// starts; numerical trouble is reported through `status`.
SolveResult Solve(const LpProblem& problem, const SolverConfig& config);

// x = proj_X(0), the starting primal point.
std::vector<double> InitialPrimal(std::span<const double> lower,
                                  std::span<const double> upper);

}  // namespace gridpdlp

#endif  // GRIDPDLP_SOLVER_H_

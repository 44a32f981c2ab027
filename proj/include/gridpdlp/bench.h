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

// Experiment matrix: instances x (permutation, partition) x grids.

#ifndef GRIDPDLP_BENCH_H_
#define GRIDPDLP_BENCH_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "gridpdlp/generators.h"
#include "gridpdlp/lp_model.h"
#include "gridpdlp/solver.h"

namespace gridpdlp {

// exp(mean(log(t + shift))) - shift; 0 for an empty list.
double ShiftedGeometricMean(std::span<const double> times, double shift = 10.0);

struct BenchInstance {
  std::string name;
  LpProblem problem;
};

struct StrategyCell {
  PermutationStrategy permutation = PermutationStrategy::kBlockRandom;
  PartitionStrategy partition = PartitionStrategy::kNnz;
  friend bool operator==(const StrategyCell&, const StrategyCell&) = default;
};

// All six permutation x partition combinations.
std::vector<StrategyCell> AllStrategyCells();

struct ExperimentOptions {
  SolverConfig base;  // layout fields are overridden per cell
  std::vector<StrategyCell> cells = AllStrategyCells();
  std::vector<GridTopology> grids = {{2, 2}};
  // Run cells concurrently. Wall times are then meaningless; use for
  // property runs only.
  bool parallel = false;
};

struct ExperimentRecord {
  std::string instance;
  StrategyCell cell;
  GridTopology grid;
  SolveStatus status = SolveStatus::kIterationLimit;
  double objective = 0.0;
  int64_t iterations = 0;
  int64_t restarts = 0;
  double wall_seconds = 0.0;
  int64_t nnz_min = 0;
  int64_t nnz_max = 0;
  double nnz_max_over_mean = 0.0;
  CommCounters loop_counters;  // device (0, 0)
};

struct ExperimentAggregate {
  StrategyCell cell;
  GridTopology grid;
  int solved = 0;
  int total = 0;
  // Unsolved instances enter at the time limit (or their wall time when no
  // limit is set) and are counted in `total - solved`.
  double sgm10_seconds = 0.0;
};

struct ExperimentReport {
  std::vector<ExperimentRecord> records;
  std::vector<ExperimentAggregate> aggregates;
};

ExperimentReport RunMatrixExperiment(std::span<const BenchInstance> instances,
                                     const ExperimentOptions& options);

void WriteCsv(const ExperimentReport& report, std::ostream& out);
nlohmann::json ToJson(const ExperimentReport& report);

// A suite file (TOML) names instances, the strategy matrix, grids and solver
// settings; see README.md for the format.
struct BenchSuite {
  std::vector<BenchInstance> instances;
  ExperimentOptions options;
  std::optional<std::filesystem::path> csv_path;
  std::optional<std::filesystem::path> json_path;
};

// Relative MPS paths resolve against the suite file's directory. Throws
// std::invalid_argument on malformed suites.
BenchSuite LoadBenchSuite(const std::filesystem::path& path);

}  // namespace gridpdlp

#endif  // GRIDPDLP_BENCH_H_

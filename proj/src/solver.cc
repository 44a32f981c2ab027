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

#include "gridpdlp/solver.h"

#include <algorithm>

namespace gridpdlp {

LayoutOptions SolverConfig::layout_options() const {
  LayoutOptions o;
  o.num_procs = num_procs;
  o.grid = grid;
  o.permutation = permutation;
  o.partition = partition;
  o.block_size = block_size;
  o.seed = seed;
  return o;
}

std::vector<double> InitialPrimal(std::span<const double> lower,
                                  std::span<const double> upper) {
  std::vector<double> x(lower.size());
  for (size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(0.0, lower[j], upper[j]);
  return x;
}

SolveResult Solve(const LpProblem& problem, const SolverConfig& config) {
  problem.Validate();
  const auto start = std::chrono::steady_clock::now();
  const PartitionLayout layout = BuildLayout(problem, config.layout_options());
  const std::vector<LocalBlock> blocks = Distribute(problem, layout);
  const GridTopology topo = layout.topology;

  std::vector<DeviceResult> results(topo.size());
  SimulatedGrid grid(topo, {config.execution, config.comm_timeout});
  grid.Run([&](Communicator& comm) {
    const GridCoord c = comm.coord();
    const int index = c.row * topo.cols + c.col;
    const LocalBlock& block = blocks[index];
    results[index] = RunDevice(
        block, config.engine, problem.objective_constant,
        InitialPrimal(block.var_lower, block.var_upper),
        std::vector<double>(block.num_rows(), 0.0), comm);
  });

  SolveResult out;
  const DeviceResult& lead = results[0];
  out.status = lead.status;
  out.kkt = lead.report;
  out.iterations = lead.iterations;
  out.restarts = lead.restarts;
  out.spectral_norm = lead.spectral_norm;
  out.final_step = lead.final_step;

  // x[j] from the top row of the grid, y[i] from the left column.
  std::vector<std::vector<double>> x_blocks(topo.cols);
  std::vector<std::vector<double>> y_blocks(topo.rows);
  for (int j = 0; j < topo.cols; ++j) x_blocks[j] = results[j].x;
  for (int i = 0; i < topo.rows; ++i) y_blocks[i] = results[i * topo.cols].y;
  GlobalVectors global = UnpermuteSolution(layout, x_blocks, y_blocks);
  out.x = std::move(global.x);
  out.y = std::move(global.y);
  out.objective = ReportedObjective(problem, ObjectiveValue(problem, out.x));

  const size_t traced = lead.x_trace.size();
  for (size_t k = 0; k < traced; ++k) {
    for (int j = 0; j < topo.cols; ++j) x_blocks[j] = results[j].x_trace[k];
    for (int i = 0; i < topo.rows; ++i) {
      y_blocks[i] = results[i * topo.cols].y_trace[k];
    }
    GlobalVectors g = UnpermuteSolution(layout, x_blocks, y_blocks);
    out.x_trace.push_back(std::move(g.x));
    out.y_trace.push_back(std::move(g.y));
  }

  const std::vector<CommCounters>& totals = grid.counters();
  for (int d = 0; d < topo.size(); ++d) {
    out.setup_counters.push_back(results[d].setup_counters);
    out.loop_counters.push_back(totals[d] - results[d].setup_counters);
  }
  out.layout = SummarizeLayout(problem, layout);
  out.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return out;
}

}  // namespace gridpdlp

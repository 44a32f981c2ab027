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

// gridpdlp command-line front end.
//
//   gridpdlp solve  <file.mps> [layout flags] [--tol E] [--max-iters N] ...
//   gridpdlp layout <file.mps> [layout flags] [--json out.json]
//   gridpdlp bench  <suite.toml> [--csv out.csv] [--json out.json]
//
// Exit status: 0 optimal, 2 iteration/time limit, 3 numerical failure,
// 1 usage, input or layout errors.
//
// GRIDPDLP_LOG selects verbosity: 0 (silent), 1 (summary, default),
// 2 (one line per KKT evaluation on stderr).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "gridpdlp/bench.h"
#include "gridpdlp/mps_io.h"
#include "gridpdlp/partition.h"
#include "gridpdlp/result_json.h"
#include "gridpdlp/solver.h"

namespace gridpdlp {
namespace {

constexpr int kExitOptimal = 0;
constexpr int kExitUsage = 1;
constexpr int kExitLimit = 2;
constexpr int kExitNumerical = 3;

int LogLevel() {
  const char* v = std::getenv("GRIDPDLP_LOG");
  if (v == nullptr || *v == '\0') return 1;
  return std::atoi(v);
}

struct LayoutFlags {
  std::optional<int> procs;
  std::string grid;
  int64_t block_size = kDefaultBlockSize;
  std::string perm = "block";
  std::string partition = "nnz";
  uint64_t seed = 0;

  void Register(CLI::App* app) {
    app->add_option("--procs", procs, "Number of devices")->check(CLI::PositiveNumber);
    app->add_option("--grid", grid, "Grid override RxC");
    app->add_option("--block-size", block_size, "Block size for block_random")
        ->check(CLI::PositiveNumber);
    app->add_option("--perm", perm, "none|full|block")
        ->check(CLI::IsMember({"none", "full", "full_random", "block", "block_random"}));
    app->add_option("--partition", partition, "uniform|nnz")
        ->check(CLI::IsMember({"uniform", "nnz"}));
    app->add_option("--seed", seed, "Permutation seed");
  }

  // Fills the layout part of `config`; throws std::invalid_argument.
  void Apply(SolverConfig& config) const {
    config.permutation = *ParsePermutationStrategy(perm);
    config.partition = *ParsePartitionStrategy(partition);
    config.block_size = block_size;
    config.seed = seed;
    config.num_procs = procs.value_or(1);
    if (!grid.empty()) {
      const auto g = ParseGridSpec(grid);
      if (!g) throw std::invalid_argument("--grid expects RxC, got '" + grid + "'");
      if (procs && g->size() > *procs) {
        throw std::invalid_argument(
            fmt::format("--grid {} needs {} devices but --procs is {}", grid,
                        g->size(), *procs));
      }
      config.grid = g;
      if (!procs) config.num_procs = g->size();
    }
  }
};

void WriteJsonFile(const std::string& path, const nlohmann::json& j) {
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

int ExitCodeFor(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return kExitOptimal;
    case SolveStatus::kIterationLimit:
    case SolveStatus::kTimeLimit: return kExitLimit;
    case SolveStatus::kNumericalFailure: return kExitNumerical;
  }
  return kExitUsage;
}

void PrintLayout(const LayoutSummary& s) {
  fmt::print("grid {}x{}  total_nnz {}  max/mean {:.4f}\n", s.topology.rows,
             s.topology.cols, s.total_nnz, s.max_over_mean_nnz);
  for (const DeviceLoad& d : s.devices) {
    fmt::print("  ({},{})  rows {:>8}  cols {:>8}  nnz {:>10}\n", d.coord.row,
               d.coord.col, d.rows, d.cols, d.nnz);
  }
}

int Main(int argc, char** argv) {
  CLI::App app{"Distributed PDHG linear-programming solver on a simulated device grid"};
  app.require_subcommand(1);

  // solve
  CLI::App* solve = app.add_subcommand("solve", "Solve an MPS file");
  std::string solve_file;
  LayoutFlags solve_layout;
  double tol = 1e-4;
  int64_t max_iters = 1000000;
  int64_t kkt_interval = 64;
  double time_limit = kInfinity;
  std::string solve_json;
  bool timings = false;
  bool no_solution = false;
  bool threads = false;
  solve->add_option("file", solve_file, "MPS file (.mps or .mps.gz)")->required();
  solve_layout.Register(solve);
  solve->add_option("--tol", tol, "Relative KKT tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--max-iters", max_iters, "Iteration limit")->check(CLI::NonNegativeNumber);
  solve->add_option("--kkt-interval", kkt_interval, "Iterations between KKT checks")
      ->check(CLI::PositiveNumber);
  solve->add_option("--time-limit", time_limit, "Seconds")->check(CLI::PositiveNumber);
  solve->add_option("--json", solve_json, "Write the result as JSON ('-' for stdout)");
  solve->add_flag("--timings", timings, "Include wall time in the JSON");
  solve->add_flag("--no-solution", no_solution, "Omit x and y from the JSON");
  solve->add_flag("--threads", threads, "One OS thread per device instead of fibers");

  // layout
  CLI::App* layout = app.add_subcommand("layout", "Print per-device sizes without solving");
  std::string layout_file;
  LayoutFlags layout_flags;
  std::string layout_json;
  layout->add_option("file", layout_file, "MPS file")->required();
  layout_flags.Register(layout);
  layout->add_option("--json", layout_json, "Write the layout as JSON ('-' for stdout)");

  // bench
  CLI::App* bench = app.add_subcommand("bench", "Run an experiment suite");
  std::string suite_file;
  std::string bench_csv;
  std::string bench_json;
  bench->add_option("suite", suite_file, "Suite TOML file")->required();
  bench->add_option("--csv", bench_csv, "CSV report path (overrides the suite)");
  bench->add_option("--json", bench_json, "JSON report path (overrides the suite)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  const int log_level = LogLevel();
  try {
    if (*solve) {
      SolverConfig config;
      solve_layout.Apply(config);
      config.engine.tolerance = tol;
      config.engine.max_iterations = max_iters;
      config.engine.kkt_interval = kkt_interval;
      config.engine.time_limit_seconds = time_limit;
      config.execution = threads ? ExecutionMode::kThreads : ExecutionMode::kFibers;
      if (log_level >= 2) {
        config.engine.on_kkt = [](const KktLogEntry& e) {
          std::cerr << FormatKktLogLine(e) << "\n";
        };
      }
      const LpProblem problem = ReadMpsFile(solve_file);
      const SolveResult result = Solve(problem, config);
      if (log_level >= 1) {
        fmt::print("status {}  objective {:.12g}  iterations {}  restarts {}  "
                   "kkt {:.3e}  grid {}x{}  time {:.3f}s\n",
                   ToString(result.status), result.objective, result.iterations,
                   result.restarts, result.kkt.overall(),
                   result.layout.topology.rows, result.layout.topology.cols,
                   result.wall_seconds);
      }
      if (!solve_json.empty()) {
        JsonOptions opts;
        opts.include_timings = timings;
        opts.include_solution = !no_solution;
        WriteJsonFile(solve_json, ToJson(result, opts));
      }
      return ExitCodeFor(result.status);
    }
    if (*layout) {
      SolverConfig config;
      layout_flags.Apply(config);
      const LpProblem problem = ReadMpsFile(layout_file);
      const PartitionLayout l = BuildLayout(problem, config.layout_options());
      const LayoutSummary s = SummarizeLayout(problem, l);
      if (log_level >= 1) PrintLayout(s);
      if (!layout_json.empty()) WriteJsonFile(layout_json, ToJson(s));
      return kExitOptimal;
    }
    if (*bench) {
      BenchSuite suite = LoadBenchSuite(suite_file);
      if (!bench_csv.empty()) suite.csv_path = bench_csv;
      if (!bench_json.empty()) suite.json_path = bench_json;
      const ExperimentReport report = RunMatrixExperiment(suite.instances, suite.options);
      if (suite.csv_path) {
        std::ofstream out(*suite.csv_path);
        if (!out) throw std::runtime_error("cannot write " + suite.csv_path->string());
        WriteCsv(report, out);
      } else if (log_level >= 1) {
        WriteCsv(report, std::cout);
      }
      if (suite.json_path) WriteJsonFile(suite.json_path->string(), ToJson(report));
      if (log_level >= 1) {
        for (const ExperimentAggregate& a : report.aggregates) {
          fmt::print(stderr, "{:>6} {:>8} {}x{}  solved {}/{}  sgm10 {:.3f}s\n",
                     ToString(a.cell.permutation), ToString(a.cell.partition),
                     a.grid.rows, a.grid.cols, a.solved, a.total, a.sgm10_seconds);
        }
      }
      return kExitOptimal;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace gridpdlp

int main(int argc, char** argv) { return gridpdlp::Main(argc, argv); }

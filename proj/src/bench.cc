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

#include "gridpdlp/bench.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "toml.hpp"

#include "gridpdlp/mps_io.h"
#include "gridpdlp/result_json.h"

namespace gridpdlp {

double ShiftedGeometricMean(std::span<const double> times, double shift) {
  if (times.empty()) return 0.0;
  double sum = 0.0;
  for (double t : times) sum += std::log(t + shift);
  return std::exp(sum / static_cast<double>(times.size())) - shift;
}

std::vector<StrategyCell> AllStrategyCells() {
  std::vector<StrategyCell> cells;
  for (auto perm : {PermutationStrategy::kNone, PermutationStrategy::kFullRandom,
                    PermutationStrategy::kBlockRandom}) {
    for (auto part : {PartitionStrategy::kUniform, PartitionStrategy::kNnz}) {
      cells.push_back({perm, part});
    }
  }
  return cells;
}

namespace {

ExperimentRecord RunOne(const BenchInstance& inst, const StrategyCell& cell,
                        const GridTopology& grid, const SolverConfig& base) {
  SolverConfig cfg = base;
  cfg.permutation = cell.permutation;
  cfg.partition = cell.partition;
  cfg.grid = grid;
  cfg.num_procs = grid.size();
  const SolveResult r = Solve(inst.problem, cfg);

  ExperimentRecord rec;
  rec.instance = inst.name;
  rec.cell = cell;
  rec.grid = grid;
  rec.status = r.status;
  rec.objective = r.objective;
  rec.iterations = r.iterations;
  rec.restarts = r.restarts;
  rec.wall_seconds = r.wall_seconds;
  rec.nnz_max_over_mean = r.layout.max_over_mean_nnz;
  if (!r.layout.devices.empty()) {
    auto [lo, hi] = std::minmax_element(
        r.layout.devices.begin(), r.layout.devices.end(),
        [](const DeviceLoad& a, const DeviceLoad& b) { return a.nnz < b.nnz; });
    rec.nnz_min = lo->nnz;
    rec.nnz_max = hi->nnz;
  }
  if (!r.loop_counters.empty()) rec.loop_counters = r.loop_counters[0];
  return rec;
}

std::string GridName(const GridTopology& g) {
  return fmt::format("{}x{}", g.rows, g.cols);
}

}  // namespace

ExperimentReport RunMatrixExperiment(std::span<const BenchInstance> instances,
                                     const ExperimentOptions& options) {
  struct Job {
    size_t instance, cell, grid;
  };
  std::vector<Job> jobs;
  for (size_t g = 0; g < options.grids.size(); ++g) {
    for (size_t c = 0; c < options.cells.size(); ++c) {
      for (size_t i = 0; i < instances.size(); ++i) jobs.push_back({i, c, g});
    }
  }

  ExperimentReport report;
  report.records.resize(jobs.size());
  auto run = [&](size_t k) {
    const Job& job = jobs[k];
    report.records[k] = RunOne(instances[job.instance], options.cells[job.cell],
                               options.grids[job.grid], options.base);
  };
  if (options.parallel) {
    std::atomic<size_t> next{0};
    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t k = next++; k < jobs.size(); k = next++) {
          try {
            run(k);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  } else {
    for (size_t k = 0; k < jobs.size(); ++k) run(k);
  }

  const double limit = options.base.engine.time_limit_seconds;
  for (size_t g = 0; g < options.grids.size(); ++g) {
    for (size_t c = 0; c < options.cells.size(); ++c) {
      ExperimentAggregate agg;
      agg.cell = options.cells[c];
      agg.grid = options.grids[g];
      std::vector<double> times;
      for (size_t k = 0; k < jobs.size(); ++k) {
        if (jobs[k].grid != g || jobs[k].cell != c) continue;
        const ExperimentRecord& rec = report.records[k];
        ++agg.total;
        if (rec.status == SolveStatus::kOptimal) {
          ++agg.solved;
          times.push_back(rec.wall_seconds);
        } else {
          times.push_back(std::isfinite(limit) ? std::max(limit, rec.wall_seconds)
                                               : rec.wall_seconds);
        }
      }
      agg.sgm10_seconds = ShiftedGeometricMean(times);
      report.aggregates.push_back(agg);
    }
  }
  return report;
}

void WriteCsv(const ExperimentReport& report, std::ostream& out) {
  out << "instance,permutation,partition,grid,status,objective,iterations,"
         "restarts,wall_seconds,nnz_min,nnz_max,nnz_max_over_mean,"
         "vector_calls,scalar_calls,elements\n";
  for (const ExperimentRecord& r : report.records) {
    out << fmt::format("{},{},{},{},{},{:.17g},{},{},{:.6f},{},{},{:.6f},{},{},{}\n",
                       r.instance, ToString(r.cell.permutation),
                       ToString(r.cell.partition), GridName(r.grid),
                       ToString(r.status), r.objective, r.iterations, r.restarts,
                       r.wall_seconds, r.nnz_min, r.nnz_max, r.nnz_max_over_mean,
                       r.loop_counters.vector_calls(),
                       r.loop_counters.scalar_calls(),
                       r.loop_counters.elements());
  }
}

nlohmann::json ToJson(const ExperimentReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const ExperimentRecord& r : report.records) {
    records.push_back({{"instance", r.instance},
                       {"permutation", ToString(r.cell.permutation)},
                       {"partition", ToString(r.cell.partition)},
                       {"grid", GridName(r.grid)},
                       {"status", ToString(r.status)},
                       {"objective", r.objective},
                       {"iterations", r.iterations},
                       {"restarts", r.restarts},
                       {"wall_seconds", r.wall_seconds},
                       {"nnz_min", r.nnz_min},
                       {"nnz_max", r.nnz_max},
                       {"nnz_max_over_mean", r.nnz_max_over_mean},
                       {"loop_counters", ToJson(r.loop_counters)}});
  }
  nlohmann::json aggregates = nlohmann::json::array();
  for (const ExperimentAggregate& a : report.aggregates) {
    aggregates.push_back({{"permutation", ToString(a.cell.permutation)},
                          {"partition", ToString(a.cell.partition)},
                          {"grid", GridName(a.grid)},
                          {"solved", a.solved},
                          {"total", a.total},
                          {"sgm10_seconds", a.sgm10_seconds}});
  }
  return {{"records", std::move(records)}, {"aggregates", std::move(aggregates)}};
}

namespace {

[[noreturn]] void SuiteError(const std::string& msg) {
  throw std::invalid_argument("bench suite: " + msg);
}

template <typename T>
T Required(const toml::table& t, std::string_view key, std::string_view where) {
  const auto v = t[key].value<T>();
  if (!v) SuiteError(fmt::format("{}: missing or mistyped '{}'", where, key));
  return *v;
}

std::vector<std::string> StringList(const toml::table& t, std::string_view key) {
  std::vector<std::string> out;
  const toml::array* arr = t[key].as_array();
  if (!arr) return out;
  for (const toml::node& node : *arr) {
    const auto s = node.value<std::string>();
    if (!s) SuiteError(fmt::format("'{}' must be a list of strings", key));
    out.push_back(*s);
  }
  return out;
}

}  // namespace

BenchSuite LoadBenchSuite(const std::filesystem::path& path) {
  toml::table root;
  try {
    root = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    SuiteError(fmt::format("{}: {}", path.string(), e.description()));
  }
  const std::filesystem::path dir = path.parent_path();
  BenchSuite suite;

  if (const toml::table* s = root["solver"].as_table()) {
    EngineConfig& e = suite.options.base.engine;
    e.tolerance = (*s)["tolerance"].value_or(e.tolerance);
    e.max_iterations = (*s)["max_iterations"].value_or(e.max_iterations);
    e.time_limit_seconds = (*s)["time_limit"].value_or(e.time_limit_seconds);
    e.kkt_interval = (*s)["kkt_interval"].value_or(e.kkt_interval);
    suite.options.base.seed = (*s)["seed"].value_or(int64_t{0});
    suite.options.base.block_size =
        (*s)["block_size"].value_or(suite.options.base.block_size);
  }

  if (const toml::table* mt = root["matrix"].as_table()) {
    const auto perms = StringList(*mt, "permutations");
    const auto parts = StringList(*mt, "partitions");
    if (!perms.empty() || !parts.empty()) {
      std::vector<PermutationStrategy> ps;
      std::vector<PartitionStrategy> qs;
      for (const auto& s : perms) {
        auto v = ParsePermutationStrategy(s);
        if (!v) SuiteError("unknown permutation '" + s + "'");
        ps.push_back(*v);
      }
      for (const auto& s : parts) {
        auto v = ParsePartitionStrategy(s);
        if (!v) SuiteError("unknown partition '" + s + "'");
        qs.push_back(*v);
      }
      if (ps.empty()) ps = {PermutationStrategy::kBlockRandom};
      if (qs.empty()) qs = {PartitionStrategy::kNnz};
      suite.options.cells.clear();
      for (auto p : ps) {
        for (auto q : qs) suite.options.cells.push_back({p, q});
      }
    }
    const auto grids = StringList(*mt, "grids");
    if (!grids.empty()) {
      suite.options.grids.clear();
      for (const auto& s : grids) {
        auto g = ParseGridSpec(s);
        if (!g) SuiteError("bad grid '" + s + "'");
        suite.options.grids.push_back(*g);
      }
    }
    suite.options.parallel = (*mt)["parallel"].value_or(false);
  }

  const toml::array* instances = root["instance"].as_array();
  if (!instances || instances->empty()) SuiteError("no [[instance]] entries");
  for (const toml::node& node : *instances) {
    const toml::table* t = node.as_table();
    if (!t) SuiteError("[[instance]] entries must be tables");
    BenchInstance inst;
    if (const auto file = (*t)["file"].value<std::string>()) {
      std::filesystem::path p(*file);
      if (p.is_relative()) p = dir / p;
      inst.problem = ReadMpsFile(p.string());
      inst.name = (*t)["name"].value_or(p.stem().string());
    } else {
      const std::string kind_name = Required<std::string>(*t, "kind", "instance");
      GeneratorSpec spec;
      const auto kind = ParseGeneratorKind(kind_name);
      if (!kind) SuiteError("unknown generator kind '" + kind_name + "'");
      spec.kind = *kind;
      spec.m = (*t)["m"].value_or(int64_t{0});
      spec.n = (*t)["n"].value_or(int64_t{0});
      spec.nnz_target = (*t)["nnz_target"].value_or(int64_t{0});
      spec.num_blocks = (*t)["num_blocks"].value_or(int64_t{0});
      spec.block_rows = (*t)["block_rows"].value_or(int64_t{0});
      spec.block_cols = (*t)["block_cols"].value_or(int64_t{0});
      spec.overlap = (*t)["overlap"].value_or(int64_t{0});
      spec.seed = static_cast<uint64_t>((*t)["seed"].value_or(int64_t{0}));
      inst.problem = Generate(spec).problem;
      inst.name = (*t)["name"].value_or(inst.problem.name);
    }
    suite.instances.push_back(std::move(inst));
  }

  if (const toml::table* o = root["output"].as_table()) {
    auto resolve = [&](std::string_view key) -> std::optional<std::filesystem::path> {
      const auto s = (*o)[key].value<std::string>();
      if (!s) return std::nullopt;
      std::filesystem::path p(*s);
      return p.is_relative() ? dir / p : p;
    };
    suite.csv_path = resolve("csv");
    suite.json_path = resolve("json");
  }
  return suite;
}

}  // namespace gridpdlp

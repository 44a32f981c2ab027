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

#include "gridpdlp/partition.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>

namespace gridpdlp {

const char* ToString(PermutationStrategy s) {
  switch (s) {
    case PermutationStrategy::kNone: return "none";
    case PermutationStrategy::kFullRandom: return "full_random";
    case PermutationStrategy::kBlockRandom: return "block_random";
  }
  return "?";
}

const char* ToString(PartitionStrategy s) {
  switch (s) {
    case PartitionStrategy::kUniform: return "uniform";
    case PartitionStrategy::kNnz: return "nnz";
  }
  return "?";
}

std::optional<PermutationStrategy> ParsePermutationStrategy(std::string_view s) {
  if (s == "none") return PermutationStrategy::kNone;
  if (s == "full" || s == "full_random") return PermutationStrategy::kFullRandom;
  if (s == "block" || s == "block_random") return PermutationStrategy::kBlockRandom;
  return std::nullopt;
}

std::optional<PartitionStrategy> ParsePartitionStrategy(std::string_view s) {
  if (s == "uniform") return PartitionStrategy::kUniform;
  if (s == "nnz") return PartitionStrategy::kNnz;
  return std::nullopt;
}

std::optional<GridTopology> ParseGridSpec(std::string_view s) {
  const size_t sep = s.find_first_of("xX,");
  if (sep == std::string_view::npos) return std::nullopt;
  auto parse = [](std::string_view part) -> std::optional<int> {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || v < 1) {
      return std::nullopt;
    }
    return v;
  };
  const auto rows = parse(s.substr(0, sep));
  const auto cols = parse(s.substr(sep + 1));
  if (!rows || !cols) return std::nullopt;
  return GridTopology{*rows, *cols};
}

GridTopology SelectGrid(int64_t m, int64_t n, int num_procs) {
  if (num_procs < 1) throw std::invalid_argument("num_procs must be >= 1");
  const int64_t max_rows = std::max<int64_t>(m, 1);
  const int64_t max_cols = std::max<int64_t>(n, 1);
  const double target = std::log(static_cast<double>(max_rows)) -
                        std::log(static_cast<double>(max_cols));
  GridTopology best;
  int64_t best_product = 0;
  double best_distance = 0.0;
  for (int r = 1; r <= num_procs && r <= max_rows; ++r) {
    for (int c = 1; r * c <= num_procs && c <= max_cols; ++c) {
      const int64_t product = static_cast<int64_t>(r) * c;
      const double distance = std::abs(std::log(static_cast<double>(r)) -
                                       std::log(static_cast<double>(c)) - target);
      // Equal distances (to rounding) keep the larger |R|, which is visited
      // later in this loop.
      constexpr double kTie = 1e-12;
      if (product > best_product ||
          (product == best_product && distance <= best_distance + kTie)) {
        best = {r, c};
        best_product = product;
        best_distance = distance;
      }
    }
  }
  return best;
}

Permutation Permutation::Identity(int64_t len) {
  std::vector<int64_t> order(len);
  std::iota(order.begin(), order.end(), 0);
  return FromOrder(std::move(order));
}

Permutation Permutation::FromOrder(std::vector<int64_t> order) {
  Permutation p;
  p.inverse.assign(order.size(), -1);
  for (size_t k = 0; k < order.size(); ++k) {
    const int64_t o = order[k];
    if (o < 0 || o >= static_cast<int64_t>(order.size()) || p.inverse[o] != -1) {
      throw std::invalid_argument("order is not a permutation");
    }
    p.inverse[o] = static_cast<int64_t>(k);
  }
  p.order = std::move(order);
  return p;
}

bool Permutation::IsIdentity() const {
  for (size_t k = 0; k < order.size(); ++k) {
    if (order[k] != static_cast<int64_t>(k)) return false;
  }
  return true;
}

Permutation BlockRandomPermutation(int64_t len, int64_t block_size,
                                   uint64_t seed) {
  if (block_size < 1) throw std::invalid_argument("block size must be >= 1");
  const int64_t num_blocks = (len + block_size - 1) / block_size;
  std::vector<int64_t> blocks(num_blocks);
  std::iota(blocks.begin(), blocks.end(), 0);
  std::mt19937_64 rng(seed);
  for (int64_t i = num_blocks - 1; i >= 1; --i) {
    const auto j = static_cast<int64_t>(rng() % static_cast<uint64_t>(i + 1));
    std::swap(blocks[i], blocks[j]);
  }
  std::vector<int64_t> order;
  order.reserve(len);
  for (int64_t b : blocks) {
    for (int64_t k = b * block_size; k < std::min(len, (b + 1) * block_size); ++k) {
      order.push_back(k);
    }
  }
  return Permutation::FromOrder(std::move(order));
}

std::vector<int64_t> UniformCuts(int64_t len, int parts) {
  if (parts < 1) throw std::invalid_argument("parts must be >= 1");
  std::vector<int64_t> cuts(parts + 1);
  for (int k = 0; k <= parts; ++k) {
    cuts[k] = (static_cast<int64_t>(k) * len + parts - 1) / parts;
  }
  return cuts;
}

std::vector<int64_t> NnzBalancedCuts(std::span<const int64_t> counts,
                                     int parts) {
  if (parts < 1) throw std::invalid_argument("parts must be >= 1");
  const auto len = static_cast<int64_t>(counts.size());
  if (parts == 1) return {0, len};
  if (parts > len) {
    throw std::invalid_argument("cannot split " + std::to_string(len) +
                                " indices into " + std::to_string(parts) +
                                " non-empty parts");
  }
  int64_t total = 0;
  for (int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("counts must be non-negative");
    total += c;
  }
  if (total == 0) return UniformCuts(len, parts);

  std::vector<int64_t> cuts = {0};
  int k = 1;
  int64_t running = 0;
  for (int64_t idx = 0; idx < len && k < parts; ++idx) {
    running += counts[idx];
    const int64_t end = idx + 1;
    const int64_t left = len - end;
    const int parts_after = parts - k;
    // Exact comparison of running >= k * total / parts.
    const bool reached = static_cast<__int128>(running) * parts >=
                         static_cast<__int128>(k) * total;
    if ((reached && left >= parts_after) || left == parts_after) {
      cuts.push_back(end);
      ++k;
    }
  }
  cuts.push_back(len);
  return cuts;
}

namespace {

uint64_t ColumnSeed(uint64_t seed) { return seed ^ 0x9e3779b97f4a7c15ULL; }

Permutation MakePermutation(PermutationStrategy strategy, int64_t len,
                            int64_t block_size, uint64_t seed) {
  switch (strategy) {
    case PermutationStrategy::kNone:
      return Permutation::Identity(len);
    case PermutationStrategy::kFullRandom:
      return BlockRandomPermutation(len, 1, seed);
    case PermutationStrategy::kBlockRandom:
      return BlockRandomPermutation(len, block_size, seed);
  }
  return Permutation::Identity(len);
}

std::vector<int64_t> ColumnCounts(const SparseMatrix& a) {
  std::vector<int64_t> counts(a.num_cols, 0);
  for (int64_t c : a.col_indices) ++counts[c];
  return counts;
}

}  // namespace

PartitionLayout BuildLayout(const LpProblem& problem,
                            const LayoutOptions& options) {
  const int64_t m = problem.num_constraints();
  const int64_t n = problem.num_variables();
  if (options.num_procs < 1) throw std::invalid_argument("num_procs must be >= 1");
  if (options.block_size < 1) throw std::invalid_argument("block size must be >= 1");
  PartitionLayout layout;
  if (options.grid) {
    const GridTopology g = *options.grid;
    if (g.rows < 1 || g.cols < 1) {
      throw std::invalid_argument("grid dimensions must be positive");
    }
    if (g.size() > options.num_procs) {
      throw std::invalid_argument("grid " + std::to_string(g.rows) + "x" +
                                  std::to_string(g.cols) + " needs more than " +
                                  std::to_string(options.num_procs) + " devices");
    }
    if (g.rows > std::max<int64_t>(m, 1) || g.cols > std::max<int64_t>(n, 1)) {
      throw std::invalid_argument("grid has more parts than rows or columns");
    }
    layout.topology = g;
  } else {
    layout.topology = SelectGrid(m, n, options.num_procs);
  }

  layout.row_perm = MakePermutation(options.permutation, m, options.block_size,
                                    options.seed);
  layout.col_perm = MakePermutation(options.permutation, n, options.block_size,
                                    ColumnSeed(options.seed));

  if (options.partition == PartitionStrategy::kUniform) {
    layout.row_cuts = UniformCuts(m, layout.topology.rows);
    layout.col_cuts = UniformCuts(n, layout.topology.cols);
  } else {
    std::vector<int64_t> row_counts(m);
    for (int64_t r = 0; r < m; ++r) {
      row_counts[r] = problem.matrix.RowNnz(layout.row_perm.order[r]);
    }
    const std::vector<int64_t> original_col_counts = ColumnCounts(problem.matrix);
    std::vector<int64_t> col_counts(n);
    for (int64_t c = 0; c < n; ++c) {
      col_counts[c] = original_col_counts[layout.col_perm.order[c]];
    }
    layout.row_cuts = NnzBalancedCuts(row_counts, layout.topology.rows);
    layout.col_cuts = NnzBalancedCuts(col_counts, layout.topology.cols);
  }
  return layout;
}

LpProblem PermuteProblem(const LpProblem& problem,
                         const PartitionLayout& layout) {
  const int64_t m = problem.num_constraints();
  const int64_t n = problem.num_variables();
  const auto& rows = layout.row_perm.order;
  const auto& cols = layout.col_perm.order;
  const auto& col_inverse = layout.col_perm.inverse;
  GRIDPDLP_CHECK(static_cast<int64_t>(rows.size()) == m &&
                     static_cast<int64_t>(cols.size()) == n,
                 "PermuteProblem: layout does not match the problem");

  LpProblem out;
  out.name = problem.name;
  out.maximize = problem.maximize;
  out.objective_constant = problem.objective_constant;
  const SparseMatrix& a = problem.matrix;
  SparseMatrix& pa = out.matrix;
  pa.num_rows = m;
  pa.num_cols = n;
  pa.row_offsets.assign(m + 1, 0);
  pa.col_indices.reserve(a.nnz());
  pa.values.reserve(a.nnz());
  std::vector<std::pair<int64_t, double>> row;
  for (int64_t r = 0; r < m; ++r) {
    const int64_t src = rows[r];
    row.clear();
    for (int64_t k = a.row_offsets[src]; k < a.row_offsets[src + 1]; ++k) {
      row.emplace_back(col_inverse[a.col_indices[k]], a.values[k]);
    }
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      pa.col_indices.push_back(c);
      pa.values.push_back(v);
    }
    pa.row_offsets[r + 1] = pa.nnz();
  }

  auto gather = [](const auto& src, const std::vector<int64_t>& order) {
    std::remove_cvref_t<decltype(src)> dst;
    if (src.empty()) return dst;
    dst.reserve(order.size());
    for (int64_t o : order) dst.push_back(src[o]);
    return dst;
  };
  out.objective = gather(problem.objective, cols);
  out.var_lower = gather(problem.var_lower, cols);
  out.var_upper = gather(problem.var_upper, cols);
  out.col_names = gather(problem.col_names, cols);
  out.con_lower = gather(problem.con_lower, rows);
  out.con_upper = gather(problem.con_upper, rows);
  out.row_names = gather(problem.row_names, rows);
  return out;
}

std::vector<LocalBlock> Distribute(const LpProblem& problem,
                                   const PartitionLayout& layout) {
  const LpProblem permuted = PermuteProblem(problem, layout);
  const GridTopology t = layout.topology;
  std::vector<LocalBlock> blocks;
  blocks.reserve(t.size());
  for (int i = 0; i < t.rows; ++i) {
    for (int j = 0; j < t.cols; ++j) {
      LocalBlock b;
      b.coord = {i, j};
      b.topology = t;
      b.rows = layout.rows_of(i);
      b.cols = layout.cols_of(j);
      b.a = SliceBlock(permuted.matrix, b.rows, b.cols);
      b.a_transpose = Transpose(b.a);
      auto slice = [](const std::vector<double>& v, IndexRange r) {
        return std::vector<double>(v.begin() + r.begin, v.begin() + r.end);
      };
      b.objective = slice(permuted.objective, b.cols);
      b.var_lower = slice(permuted.var_lower, b.cols);
      b.var_upper = slice(permuted.var_upper, b.cols);
      b.con_lower = slice(permuted.con_lower, b.rows);
      b.con_upper = slice(permuted.con_upper, b.rows);
      b.original_cols.assign(layout.col_perm.order.begin() + b.cols.begin,
                             layout.col_perm.order.begin() + b.cols.end);
      blocks.push_back(std::move(b));
    }
  }
  return blocks;
}

GlobalVectors UnpermuteSolution(const PartitionLayout& layout,
                                std::span<const std::vector<double>> x_blocks,
                                std::span<const std::vector<double>> y_blocks) {
  const GridTopology t = layout.topology;
  GRIDPDLP_CHECK(static_cast<int>(x_blocks.size()) == t.cols,
                 "UnpermuteSolution: need one x block per grid column");
  GRIDPDLP_CHECK(static_cast<int>(y_blocks.size()) == t.rows,
                 "UnpermuteSolution: need one y block per grid row");
  GlobalVectors out;
  out.x.resize(layout.col_perm.size());
  out.y.resize(layout.row_perm.size());
  for (int j = 0; j < t.cols; ++j) {
    const IndexRange r = layout.cols_of(j);
    GRIDPDLP_CHECK(static_cast<int64_t>(x_blocks[j].size()) == r.size(),
                   "UnpermuteSolution: x block has the wrong length");
    for (int64_t k = 0; k < r.size(); ++k) {
      out.x[layout.col_perm.order[r.begin + k]] = x_blocks[j][k];
    }
  }
  for (int i = 0; i < t.rows; ++i) {
    const IndexRange r = layout.rows_of(i);
    GRIDPDLP_CHECK(static_cast<int64_t>(y_blocks[i].size()) == r.size(),
                   "UnpermuteSolution: y block has the wrong length");
    for (int64_t k = 0; k < r.size(); ++k) {
      out.y[layout.row_perm.order[r.begin + k]] = y_blocks[i][k];
    }
  }
  return out;
}

namespace {

std::vector<std::vector<double>> Scatter(const Permutation& perm,
                                         const std::vector<int64_t>& cuts,
                                         std::span<const double> v) {
  GRIDPDLP_CHECK(static_cast<int64_t>(v.size()) == perm.size(),
                 "Scatter: vector has the wrong length");
  std::vector<std::vector<double>> blocks(cuts.size() - 1);
  for (size_t p = 0; p + 1 < cuts.size(); ++p) {
    for (int64_t k = cuts[p]; k < cuts[p + 1]; ++k) {
      blocks[p].push_back(v[perm.order[k]]);
    }
  }
  return blocks;
}

}  // namespace

std::vector<std::vector<double>> ScatterPrimal(const PartitionLayout& layout,
                                               std::span<const double> x) {
  return Scatter(layout.col_perm, layout.col_cuts, x);
}

std::vector<std::vector<double>> ScatterDual(const PartitionLayout& layout,
                                             std::span<const double> y) {
  return Scatter(layout.row_perm, layout.row_cuts, y);
}

LayoutSummary SummarizeLayout(const LpProblem& problem,
                              const PartitionLayout& layout) {
  const GridTopology t = layout.topology;
  LayoutSummary s;
  s.topology = t;
  s.devices.resize(t.size());
  for (int i = 0; i < t.rows; ++i) {
    for (int j = 0; j < t.cols; ++j) {
      DeviceLoad& d = s.devices[i * t.cols + j];
      d.coord = {i, j};
      d.rows = layout.rows_of(i).size();
      d.cols = layout.cols_of(j).size();
    }
  }
  auto part_of = [](const std::vector<int64_t>& cuts, int64_t idx) {
    return static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), idx) -
                            cuts.begin()) - 1;
  };
  const SparseMatrix& a = problem.matrix;
  std::vector<int> col_part(a.num_cols);
  for (int64_t c = 0; c < a.num_cols; ++c) {
    col_part[c] = part_of(layout.col_cuts, layout.col_perm.inverse[c]);
  }
  for (int64_t r = 0; r < a.num_rows; ++r) {
    const int i = part_of(layout.row_cuts, layout.row_perm.inverse[r]);
    for (int64_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      ++s.devices[i * t.cols + col_part[a.col_indices[k]]].nnz;
    }
  }
  s.total_nnz = a.nnz();
  if (s.total_nnz > 0) {
    int64_t max_nnz = 0;
    for (const auto& d : s.devices) max_nnz = std::max(max_nnz, d.nnz);
    const double mean = static_cast<double>(s.total_nnz) / t.size();
    s.max_over_mean_nnz = static_cast<double>(max_nnz) / mean;
  }
  return s;
}

}  // namespace gridpdlp

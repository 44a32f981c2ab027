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

// Maps a global LP onto a |R| x |C| device grid.
//
// Rows and columns are first permuted (optionally block-wise at random), then
// cut into |R| row ranges and |C| column ranges. Device (i, j) owns the block
// A[i, j] together with the primal slice for column range j (replicated down
// grid column j) and the dual slice for row range i (replicated across grid
// row i).

#ifndef GRIDPDLP_PARTITION_H_
#define GRIDPDLP_PARTITION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridpdlp/comm.h"
#include "gridpdlp/lp_model.h"
#include "gridpdlp/sparse_kernels.h"

namespace gridpdlp {

enum class PermutationStrategy { kNone, kFullRandom, kBlockRandom };
enum class PartitionStrategy { kUniform, kNnz };

const char* ToString(PermutationStrategy s);
const char* ToString(PartitionStrategy s);
// Accepts "none", "full"/"full_random", "block"/"block_random".
std::optional<PermutationStrategy> ParsePermutationStrategy(std::string_view s);
// Accepts "uniform", "nnz".
std::optional<PartitionStrategy> ParsePartitionStrategy(std::string_view s);

inline constexpr int64_t kDefaultBlockSize = 64;

// "RxC" (also "R,C"), both positive.
std::optional<GridTopology> ParseGridSpec(std::string_view s);

// Chooses (|R|, |C|): first maximize |R| * |C| <= num_procs (with |R| <= m
// and |C| <= n when those are positive), then pick the pair whose log aspect
// ratio is closest to log(m / n). Ties go to the larger |R|.
GridTopology SelectGrid(int64_t m, int64_t n, int num_procs);

// `order[new_position] = original_index`.
struct Permutation {
  std::vector<int64_t> order;
  std::vector<int64_t> inverse;  // inverse[original_index] = new_position

  static Permutation Identity(int64_t len);
  static Permutation FromOrder(std::vector<int64_t> order);
  int64_t size() const { return static_cast<int64_t>(order.size()); }
  bool IsIdentity() const;
};

// Indices are grouped into ceil(len / block_size) contiguous blocks (the last
// possibly short); the block order is shuffled with a Fisher-Yates shuffle
// driven by std::mt19937_64(seed), drawing j = rng() % (i + 1) for
// i = num_blocks-1 .. 1. Order inside each block is preserved.
Permutation BlockRandomPermutation(int64_t len, int64_t block_size,
                                   uint64_t seed);

// Boundaries 0 = p_0 <= ... <= p_parts = len with part k ending at the first
// index whose running count reaches k * total / parts. Every part gets at
// least one index. Throws std::invalid_argument if parts > len (except
// parts == 1).
std::vector<int64_t> NnzBalancedCuts(std::span<const int64_t> counts,
                                     int parts);

// p_k = ceil(k * len / parts).
std::vector<int64_t> UniformCuts(int64_t len, int parts);

struct LayoutOptions {
  int num_procs = 1;
  std::optional<GridTopology> grid;  // overrides SelectGrid
  PermutationStrategy permutation = PermutationStrategy::kBlockRandom;
  PartitionStrategy partition = PartitionStrategy::kNnz;
  int64_t block_size = kDefaultBlockSize;
  uint64_t seed = 0;
};

struct PartitionLayout {
  GridTopology topology;
  Permutation row_perm;
  Permutation col_perm;
  std::vector<int64_t> row_cuts;  // |R| + 1 entries
  std::vector<int64_t> col_cuts;  // |C| + 1 entries

  IndexRange rows_of(int i) const { return {row_cuts[i], row_cuts[i + 1]}; }
  IndexRange cols_of(int j) const { return {col_cuts[j], col_cuts[j + 1]}; }
};

// Throws std::invalid_argument for inconsistent options (e.g. a grid override
// with |R| * |C| > num_procs or more parts than rows/columns).
PartitionLayout BuildLayout(const LpProblem& problem,
                            const LayoutOptions& options);

// The problem with rows and columns reordered by the layout permutations.
// Names are permuted along with the data.
LpProblem PermuteProblem(const LpProblem& problem, const PartitionLayout& layout);

struct LocalBlock {
  GridCoord coord;
  GridTopology topology;
  IndexRange rows;  // in permuted row space
  IndexRange cols;  // in permuted column space
  SparseMatrix a;           // m_i x n_j
  SparseMatrix a_transpose;  // n_j x m_i
  std::vector<double> objective;  // c[j]
  std::vector<double> var_lower;
  std::vector<double> var_upper;
  std::vector<double> con_lower;
  std::vector<double> con_upper;
  std::vector<int64_t> original_cols;  // original index of each local column

  int64_t num_rows() const { return a.num_rows; }
  int64_t num_cols() const { return a.num_cols; }
};

// One block per device, row-major (index i * |C| + j).
std::vector<LocalBlock> Distribute(const LpProblem& problem,
                                   const PartitionLayout& layout);

// Concatenates per-column-range x blocks and per-row-range y blocks and maps
// them back to the original index order.
struct GlobalVectors {
  std::vector<double> x;
  std::vector<double> y;
};
GlobalVectors UnpermuteSolution(const PartitionLayout& layout,
                                std::span<const std::vector<double>> x_blocks,
                                std::span<const std::vector<double>> y_blocks);

// Splits an original-order vector into per-range blocks in permuted order
// (the inverse of the concatenation in UnpermuteSolution).
std::vector<std::vector<double>> ScatterPrimal(const PartitionLayout& layout,
                                               std::span<const double> x);
std::vector<std::vector<double>> ScatterDual(const PartitionLayout& layout,
                                             std::span<const double> y);

struct DeviceLoad {
  GridCoord coord;
  int64_t rows = 0;
  int64_t cols = 0;
  int64_t nnz = 0;
};

struct LayoutSummary {
  GridTopology topology;
  std::vector<DeviceLoad> devices;  // row-major
  int64_t total_nnz = 0;
  double max_over_mean_nnz = 0.0;  // 1 when perfectly balanced; 0 if no nnz
};

// Per-device sizes and nonzeros, computed without materializing blocks.
LayoutSummary SummarizeLayout(const LpProblem& problem,
                              const PartitionLayout& layout);

}  // namespace gridpdlp

#endif  // GRIDPDLP_PARTITION_H_

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
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "gridpdlp/generators.h"
#include "test_util.h"

namespace gridpdlp {
namespace {

TEST(SelectGrid, Examples) {
  EXPECT_EQ(SelectGrid(100, 100, 4), (GridTopology{2, 2}));
  EXPECT_EQ(SelectGrid(1512600, 126250100, 8), (GridTopology{1, 8}));
  EXPECT_EQ(SelectGrid(1000, 100, 8), (GridTopology{8, 1}));
  EXPECT_EQ(SelectGrid(7, 7, 1), (GridTopology{1, 1}));
  EXPECT_THROW(SelectGrid(5, 5, 0), std::invalid_argument);
}

TEST(SelectGrid, UsesAllDevicesWhenShapeAllows) {
  for (int p = 1; p <= 12; ++p) {
    for (int64_t m : {16, 100, 3000}) {
      const GridTopology g = SelectGrid(m, 200, p);
      EXPECT_EQ(g.size(), p) << m << " " << p;
    }
  }
}

TEST(ParseGridSpec, AcceptedAndRejectedForms) {
  EXPECT_EQ(ParseGridSpec("2x3"), (GridTopology{2, 3}));
  EXPECT_EQ(ParseGridSpec("4X1"), (GridTopology{4, 1}));
  EXPECT_EQ(ParseGridSpec("1,8"), (GridTopology{1, 8}));
  EXPECT_FALSE(ParseGridSpec("0x2"));
  EXPECT_FALSE(ParseGridSpec("2x"));
  EXPECT_FALSE(ParseGridSpec("22"));
  EXPECT_FALSE(ParseGridSpec("2x2x2"));
}

TEST(BlockRandomPermutation, OneBlockIsIdentity) {
  EXPECT_TRUE(BlockRandomPermutation(4, 4, 123).IsIdentity());
  EXPECT_TRUE(BlockRandomPermutation(3, 10, 9).IsIdentity());
  EXPECT_EQ(BlockRandomPermutation(0, 4, 1).size(), 0);
}

TEST(BlockRandomPermutation, IsABijectionThatKeepsBlocksContiguous) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const int64_t len = 1 + static_cast<int64_t>(seed * 7 % 97);
    const int64_t b = 1 + static_cast<int64_t>(seed % 9);
    const Permutation p = BlockRandomPermutation(len, b, seed);
    std::vector<int64_t> sorted = p.order;
    std::sort(sorted.begin(), sorted.end());
    for (int64_t k = 0; k < len; ++k) {
      EXPECT_EQ(sorted[k], k);
      EXPECT_EQ(p.order[p.inverse[k]], k);
    }
    // Inside each run the original indices step by one.
    for (int64_t k = 1; k < len; ++k) {
      if (p.order[k] % b != 0) EXPECT_EQ(p.order[k], p.order[k - 1] + 1);
    }
  }
}

TEST(BlockRandomPermutation, MatchesIndependentFisherYates) {
  const uint64_t seed = 42;
  std::mt19937_64 rng(seed);
  std::vector<int64_t> blocks = {0, 1, 2};
  for (int64_t i = 2; i >= 1; --i) {
    const int64_t j = static_cast<int64_t>(rng() % static_cast<uint64_t>(i + 1));
    std::swap(blocks[i], blocks[j]);
  }
  std::vector<int64_t> expected;
  for (int64_t b : blocks) {
    expected.push_back(2 * b);
    expected.push_back(2 * b + 1);
  }
  EXPECT_EQ(BlockRandomPermutation(6, 2, seed).order, expected);
}

TEST(BlockRandomPermutation, SameSeedSameOrder) {
  EXPECT_EQ(BlockRandomPermutation(1000, 64, 3).order,
            BlockRandomPermutation(1000, 64, 3).order);
  EXPECT_NE(BlockRandomPermutation(1000, 64, 3).order,
            BlockRandomPermutation(1000, 64, 4).order);
}

TEST(Permutation, FromOrderRejectsRepeats) {
  EXPECT_THROW(Permutation::FromOrder({0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation::FromOrder({0, 3}), std::invalid_argument);
}

TEST(NnzBalancedCuts, Examples) {
  const std::vector<int64_t> a = {1, 1, 1, 1}, b = {3, 1, 1, 3}, c = {5, 1, 1, 1};
  EXPECT_EQ(NnzBalancedCuts(a, 2), (std::vector<int64_t>{0, 2, 4}));
  EXPECT_EQ(NnzBalancedCuts(b, 2), (std::vector<int64_t>{0, 2, 4}));
  EXPECT_EQ(NnzBalancedCuts(c, 2), (std::vector<int64_t>{0, 1, 4}));
  EXPECT_EQ(NnzBalancedCuts(a, 1), (std::vector<int64_t>{0, 4}));
  EXPECT_THROW(NnzBalancedCuts(a, 5), std::invalid_argument);
}

TEST(NnzBalancedCuts, EqualCountsGiveUniformCuts) {
  for (int64_t len = 1; len <= 40; ++len) {
    const std::vector<int64_t> ones(len, 3);
    for (int parts = 1; parts <= len && parts <= 9; ++parts) {
      EXPECT_EQ(NnzBalancedCuts(ones, parts), UniformCuts(len, parts)) << len << "/" << parts;
    }
  }
}

TEST(NnzBalancedCuts, CutsAreStrictlyIncreasingAndCoverEverything) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int64_t len = 1 + rng() % 60;
    const int parts = 1 + static_cast<int>(rng() % std::min<int64_t>(len, 8));
    std::vector<int64_t> counts(len);
    for (auto& c : counts) c = static_cast<int64_t>(rng() % 5);
    const auto cuts = NnzBalancedCuts(counts, parts);
    ASSERT_EQ(cuts.size(), static_cast<size_t>(parts + 1));
    EXPECT_EQ(cuts.front(), 0);
    EXPECT_EQ(cuts.back(), len);
    for (int k = 0; k < parts; ++k) EXPECT_LT(cuts[k], cuts[k + 1]);
  }
}

TEST(BuildLayout, NaturalUniformIsIdentityWithEvenCuts) {
  LpProblem p;
  p.matrix = FromDense(std::vector<std::vector<double>>(8, std::vector<double>(8, 1.0)));
  p.objective.assign(8, 1.0);
  p.var_lower.assign(8, 0.0);
  p.var_upper.assign(8, 1.0);
  p.con_lower.assign(8, 0.0);
  p.con_upper.assign(8, 1.0);
  LayoutOptions o;
  o.num_procs = 4;
  o.permutation = PermutationStrategy::kNone;
  o.partition = PartitionStrategy::kUniform;
  const PartitionLayout l = BuildLayout(p, o);
  EXPECT_EQ(l.topology, (GridTopology{2, 2}));
  EXPECT_TRUE(l.row_perm.IsIdentity());
  EXPECT_TRUE(l.col_perm.IsIdentity());
  EXPECT_EQ(l.row_cuts, (std::vector<int64_t>{0, 4, 8}));
  EXPECT_EQ(l.col_cuts, (std::vector<int64_t>{0, 4, 8}));
}

TEST(BuildLayout, FullRandomIsBlockRandomWithUnitBlocks) {
  const LpProblem p = testing::RandomLp(3, 40, 30);
  LayoutOptions full;
  full.num_procs = 4;
  full.permutation = PermutationStrategy::kFullRandom;
  full.seed = 11;
  LayoutOptions block = full;
  block.permutation = PermutationStrategy::kBlockRandom;
  block.block_size = 1;
  const PartitionLayout a = BuildLayout(p, full);
  const PartitionLayout b = BuildLayout(p, block);
  EXPECT_EQ(a.row_perm.order, b.row_perm.order);
  EXPECT_EQ(a.col_perm.order, b.col_perm.order);
}

TEST(BuildLayout, RejectsImpossibleGrids) {
  const LpProblem p = testing::RandomLp(3, 6, 5);
  LayoutOptions o;
  o.num_procs = 2;
  o.grid = GridTopology{2, 2};
  EXPECT_THROW(BuildLayout(p, o), std::invalid_argument);
  o.num_procs = 64;
  o.grid = GridTopology{7, 1};
  EXPECT_THROW(BuildLayout(p, o), std::invalid_argument);
  o.grid = GridTopology{1, 6};
  EXPECT_THROW(BuildLayout(p, o), std::invalid_argument);
}

TEST(Distribute, BlocksReassembleToThePermutedMatrix) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const LpProblem p = testing::RandomLp(seed, 20 + seed, 25);
    LayoutOptions o;
    o.grid = GridTopology{1 + static_cast<int>(seed % 3), 1 + static_cast<int>(seed % 2)};
    o.num_procs = o.grid->size();
    o.block_size = 4;
    o.seed = seed;
    const PartitionLayout l = BuildLayout(p, o);
    const auto blocks = Distribute(p, l);
    const testing::Dense whole = ToDense(PermuteProblem(p, l).matrix);
    int64_t nnz = 0;
    for (const LocalBlock& b : blocks) {
      nnz += b.a.nnz();
      EXPECT_EQ(Transpose(b.a), b.a_transpose);
      const testing::Dense d = ToDense(b.a);
      for (int64_t i = 0; i < b.rows.size(); ++i) {
        for (int64_t j = 0; j < b.cols.size(); ++j) {
          EXPECT_EQ(d[i][j], whole[b.rows.begin + i][b.cols.begin + j]);
        }
      }
      for (int64_t j = 0; j < b.cols.size(); ++j) {
        EXPECT_EQ(b.objective[j], p.objective[b.original_cols[j]]);
        EXPECT_EQ(b.var_upper[j], p.var_upper[b.original_cols[j]]);
      }
    }
    EXPECT_EQ(nnz, p.matrix.nnz());
  }
}

TEST(Distribute, PermutedProductMatchesOriginal) {
  const LpProblem p = testing::RandomLp(77, 30, 30);
  LayoutOptions o;
  o.num_procs = 4;
  o.block_size = 3;
  o.seed = 5;
  const PartitionLayout l = BuildLayout(p, o);
  const LpProblem q = PermuteProblem(p, l);
  std::mt19937_64 rng(1);
  const auto x = testing::RandomVector(rng, 30);
  std::vector<double> px(30);
  for (int64_t k = 0; k < 30; ++k) px[k] = x[l.col_perm.order[k]];
  const auto ax = SpMV(p.matrix, x);
  const auto pax = SpMV(q.matrix, px);
  for (int64_t r = 0; r < 30; ++r) EXPECT_NEAR(pax[r], ax[l.row_perm.order[r]], 1e-14);
}

TEST(UnpermuteSolution, ScatterRoundTrip) {
  const LpProblem p = testing::RandomLp(9, 17, 23);
  for (GridTopology g : {GridTopology{1, 1}, {2, 3}, {3, 2}}) {
    LayoutOptions o;
    o.grid = g;
    o.num_procs = g.size();
    o.block_size = 2;
    o.seed = 12;
    const PartitionLayout l = BuildLayout(p, o);
    std::mt19937_64 rng(2);
    const auto x = testing::RandomVector(rng, 23);
    const auto y = testing::RandomVector(rng, 17);
    const auto xs = ScatterPrimal(l, x);
    const auto ys = ScatterDual(l, y);
    const GlobalVectors back = UnpermuteSolution(l, xs, ys);
    EXPECT_EQ(back.x, x);
    EXPECT_EQ(back.y, y);
  }
}

// Block-diagonal instance with four 256 x 256 blocks.
const GeneratedInstance& FourBlockInstance() {
  static const GeneratedInstance inst = [] {
    GeneratorSpec s;
    s.kind = GeneratorKind::kBlockDiagonal;
    s.num_blocks = 4;
    s.block_rows = 256;
    s.block_cols = 256;
    s.seed = 2026;
    return Generate(s);
  }();
  return inst;
}

LayoutSummary FourBlockLayout(PermutationStrategy perm, PartitionStrategy part,
                              uint64_t seed) {
  const LpProblem& p = FourBlockInstance().problem;
  LayoutOptions o;
  o.grid = GridTopology{2, 2};
  o.num_procs = 4;
  o.permutation = perm;
  o.partition = part;
  o.block_size = 64;
  o.seed = seed;
  return SummarizeLayout(p, BuildLayout(p, o));
}

TEST(LoadBalance, NaturalOrderPilesNnzOnDiagonalDevices) {
  const LayoutSummary s =
      FourBlockLayout(PermutationStrategy::kNone, PartitionStrategy::kUniform, 0);
  const int64_t diag = s.devices[0].nnz + s.devices[3].nnz;
  EXPECT_GE(static_cast<double>(diag), 0.9 * static_cast<double>(s.total_nnz));
  EXPECT_NEAR(s.max_over_mean_nnz, 2.0, 0.1);
}

TEST(LoadBalance, BlockRandomWithNnzCutsIsBalanced) {
  int good = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const LayoutSummary s =
        FourBlockLayout(PermutationStrategy::kBlockRandom, PartitionStrategy::kNnz, seed);
    if (s.max_over_mean_nnz <= 1.5) ++good;
  }
  EXPECT_GE(good, 95);
}

TEST(LoadBalance, StrategyOrdering) {
  double natural = 0.0, block = 0.0, full = 0.0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    natural += FourBlockLayout(PermutationStrategy::kNone, PartitionStrategy::kNnz, seed)
                   .max_over_mean_nnz;
    block += FourBlockLayout(PermutationStrategy::kBlockRandom, PartitionStrategy::kNnz, seed)
                 .max_over_mean_nnz;
    full += FourBlockLayout(PermutationStrategy::kFullRandom, PartitionStrategy::kNnz, seed)
                .max_over_mean_nnz;
  }
  EXPECT_LT(block, natural);
  EXPECT_LE(full, block);
  EXPECT_LT(full / 20, 1.05);
}

TEST(SummarizeLayout, CountsAddUp) {
  const LpProblem p = testing::RandomLp(4, 30, 40);
  LayoutOptions o;
  o.num_procs = 6;
  const PartitionLayout l = BuildLayout(p, o);
  const LayoutSummary s = SummarizeLayout(p, l);
  ASSERT_EQ(s.devices.size(), static_cast<size_t>(l.topology.size()));
  int64_t nnz = 0, rows = 0, cols = 0;
  for (const DeviceLoad& d : s.devices) {
    nnz += d.nnz;
    if (d.coord.col == 0) rows += d.rows;
    if (d.coord.row == 0) cols += d.cols;
  }
  EXPECT_EQ(nnz, p.matrix.nnz());
  EXPECT_EQ(s.total_nnz, nnz);
  EXPECT_EQ(rows, 30);
  EXPECT_EQ(cols, 40);
  EXPECT_GE(s.max_over_mean_nnz, 1.0);
}

}  // namespace
}  // namespace gridpdlp

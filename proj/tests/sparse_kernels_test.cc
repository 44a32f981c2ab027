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

#include "gridpdlp/sparse_kernels.h"

#include <random>

#include <gtest/gtest.h>

#include "gridpdlp/comm.h"
#include "gridpdlp/partition.h"
#include "gridpdlp/spectral_norm.h"
#include "test_util.h"

namespace gridpdlp {
namespace {

using testing::Dense;

const SparseMatrix kUpper = FromDense({{1, 2}, {0, 3}});

TEST(SpMV, Examples) {
  EXPECT_EQ(SpMV(FromDense({{1, 0}, {0, 1}}), std::vector<double>{3, 7}),
            (std::vector<double>{3, 7}));
  EXPECT_EQ(SpMV(kUpper, std::vector<double>{1, 1}), (std::vector<double>{3, 3}));
  EXPECT_EQ(SpMV(FromDense({{0, 0}, {1, 1}}), std::vector<double>{4, 5}),
            (std::vector<double>{0, 9}));
}

TEST(SpMV, DimensionMismatch) {
  EXPECT_THROW(SpMV(kUpper, std::vector<double>{1}), ContractViolation);
  EXPECT_THROW(SpMVTranspose(Transpose(kUpper), std::vector<double>{1, 2, 3}),
               ContractViolation);
}

TEST(SpMVTranspose, Examples) {
  const SparseMatrix id = FromDense({{1, 0}, {0, 1}});
  EXPECT_EQ(SpMVTranspose(Transpose(id), std::vector<double>{1, 2}),
            (std::vector<double>{1, 2}));
  EXPECT_EQ(SpMVTranspose(Transpose(kUpper), std::vector<double>{1, 1}),
            (std::vector<double>{1, 5}));
  const SparseMatrix zero = FromTriplets(2, 3, {});
  EXPECT_EQ(SpMVTranspose(Transpose(zero), std::vector<double>{1, 1}),
            (std::vector<double>{0, 0, 0}));
}

TEST(SpMV, MatchesDenseOracleOnRandomMatrices) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int64_t m = 1 + rng() % 40, n = 1 + rng() % 40;
    const SparseMatrix a = testing::RandomMatrix(rng, m, n, 0.3);
    const Dense d = ToDense(a);
    const auto x = testing::RandomVector(rng, n);
    const auto y = testing::RandomVector(rng, m);
    const auto ax = SpMV(a, x);
    const auto aty = SpMVTranspose(Transpose(a), y);
    const auto ax_ref = testing::DenseMul(d, x);
    const auto aty_ref = testing::DenseMulT(d, y, n);
    for (int64_t i = 0; i < m; ++i) EXPECT_NEAR(ax[i], ax_ref[i], 1e-14);
    for (int64_t j = 0; j < n; ++j) EXPECT_NEAR(aty[j], aty_ref[j], 1e-14);
  }
}

TEST(SpMV, AdjointConsistency) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int64_t m = 1 + rng() % 64, n = 1 + rng() % 64;
    const SparseMatrix a = testing::RandomMatrix(rng, m, n, 0.2);
    const auto x = testing::RandomVector(rng, n);
    const auto y = testing::RandomVector(rng, m);
    const double lhs = Dot(SpMV(a, x), y);
    const double rhs = Dot(x, SpMVTranspose(Transpose(a), y));
    EXPECT_LE(testing::RelDiff(lhs, rhs), 1e-12);
  }
}

TEST(Transpose, TwiceIsIdentity) {
  std::mt19937_64 rng(13);
  const SparseMatrix a = testing::RandomMatrix(rng, 17, 23, 0.25);
  const SparseMatrix t = Transpose(a);
  t.Validate();
  EXPECT_EQ(Transpose(t), a);
}

TEST(SliceBlock, FullAndEmptyRanges) {
  std::mt19937_64 rng(14);
  const SparseMatrix a = testing::RandomMatrix(rng, 6, 5, 0.5);
  EXPECT_EQ(SliceBlock(a, {0, 6}, {0, 5}), a);
  const SparseMatrix e = SliceBlock(a, {3, 3}, {0, 5});
  EXPECT_EQ(e.num_rows, 0);
  EXPECT_EQ(e.num_cols, 5);
  EXPECT_EQ(e.nnz(), 0);
}

TEST(SliceBlock, HandListedEntries) {
  const SparseMatrix a = FromDense({{1, 0, 2, 3}, {0, 4, 0, 5}, {6, 0, 7, 0}, {0, 8, 0, 9}});
  const SparseMatrix b = SliceBlock(a, {0, 2}, {2, 4});
  EXPECT_EQ(ToDense(b), (Dense{{2, 3}, {0, 5}}));
  EXPECT_THROW(SliceBlock(a, {0, 5}, {0, 1}), ContractViolation);
  EXPECT_THROW(SliceBlock(a, {2, 1}, {0, 1}), ContractViolation);
}

TEST(SliceBlock, GridOfBlocksConservesNnzAndProducts) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const int64_t m = 5 + rng() % 30, n = 5 + rng() % 30;
    const SparseMatrix a = testing::RandomMatrix(rng, m, n, 0.3);
    const int rows = 1 + rng() % 4, cols = 1 + rng() % 4;
    const auto rc = UniformCuts(m, rows);
    const auto cc = UniformCuts(n, cols);
    const auto x = testing::RandomVector(rng, n);
    const auto ax = SpMV(a, x);
    int64_t total = 0;
    for (int i = 0; i < rows; ++i) {
      std::vector<double> acc(rc[i + 1] - rc[i], 0.0);
      for (int j = 0; j < cols; ++j) {
        const SparseMatrix b = SliceBlock(a, {rc[i], rc[i + 1]}, {cc[j], cc[j + 1]});
        total += b.nnz();
        const auto part = SpMV(b, std::span(x).subspan(cc[j], cc[j + 1] - cc[j]));
        for (size_t r = 0; r < acc.size(); ++r) acc[r] += part[r];
      }
      for (size_t r = 0; r < acc.size(); ++r) {
        EXPECT_NEAR(acc[r], ax[rc[i] + r], 1e-14);
        if (cols == 1) EXPECT_EQ(acc[r], ax[rc[i] + r]);
      }
    }
    EXPECT_EQ(total, a.nnz());
  }
}

TEST(SpectralNorm, SequentialExamples) {
  EXPECT_NEAR(EstimateSpectralNorm(FromDense({{3, 0}, {0, 1}}), 50), 3.0, 1e-6);
  EXPECT_DOUBLE_EQ(EstimateSpectralNorm(FromDense({{1, 0}, {0, 1}}), 1), 1.0);
  EXPECT_EQ(EstimateSpectralNorm(FromDense({{-2}}), 1), 2.0);
  EXPECT_EQ(EstimateSpectralNorm(FromTriplets(3, 3, {}), 5), 0.0);
}

TEST(SpectralNorm, NeverExceedsTrueNormAndIsMonotone) {
  // Rank-one u v^T has norm |u| |v|.
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = testing::RandomVector(rng, 8);
    const auto v = testing::RandomVector(rng, 6);
    Dense d(8, std::vector<double>(6));
    for (int i = 0; i < 8; ++i) for (int j = 0; j < 6; ++j) d[i][j] = u[i] * v[j];
    const double truth = std::sqrt(SquaredNorm(u) * SquaredNorm(v));
    const SparseMatrix a = FromDense(d);
    double prev = 0.0;
    for (int it = 1; it <= 5; ++it) {
      const double est = EstimateSpectralNorm(a, it);
      EXPECT_LE(est, truth * (1 + 1e-14));
      EXPECT_GE(est, prev);
      prev = est;
    }
    EXPECT_NEAR(prev, truth, 1e-12 * truth);
  }
}

TEST(SpectralNorm, DistributedMatchesSequentialAcrossGrids) {
  const LpProblem p = testing::RandomLp(17, 30, 40);
  for (GridTopology g : {GridTopology{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 2}}) {
    LayoutOptions o;
    o.grid = g;
    o.num_procs = g.size();
    o.seed = 5;
    const PartitionLayout layout = BuildLayout(p, o);
    const auto blocks = Distribute(p, layout);
    const LpProblem permuted = PermuteProblem(p, layout);
    const double seq = EstimateSpectralNorm(permuted.matrix, 30, layout.col_perm.order);
    std::vector<double> got(g.size());
    SimulatedGrid grid(g);
    grid.Run([&](Communicator& comm) {
      const int d = comm.coord().row * g.cols + comm.coord().col;
      got[d] = EstimateSpectralNorm(blocks[d], comm, 30);
    });
    for (double v : got) {
      EXPECT_LE(testing::RelDiff(v, seq), 1e-12);
      EXPECT_EQ(v, got[0]);
    }
    if (g == GridTopology{1, 1}) EXPECT_EQ(got[0], seq);
  }
}

}  // namespace
}  // namespace gridpdlp

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

#include "gridpdlp/comm.h"

#include <atomic>
#include <mutex>
#include <random>

#include <gtest/gtest.h>

namespace gridpdlp {
namespace {

int Index(const Communicator& c) { return c.coord().row * c.topology().cols + c.coord().col; }

class CommModes : public ::testing::TestWithParam<ExecutionMode> {
 protected:
  SimulatedGridOptions Options() const {
    SimulatedGridOptions o;
    o.mode = GetParam();
    o.timeout = std::chrono::milliseconds(5000);
    return o;
  }
};

TEST_P(CommModes, ScalarSumsOnTwoByTwo) {
  // T = [[1, 2], [3, 4]].
  SimulatedGrid grid({2, 2}, Options());
  std::vector<double> r(4), c(4), g(4);
  grid.Run([&](Communicator& comm) {
    const double t = 1.0 + Index(comm);
    const int d = Index(comm);
    r[d] = comm.AllReduceSum(Axis::kRow, t);
    c[d] = comm.AllReduceSum(Axis::kColumn, t);
    g[d] = comm.AllReduceSum(Axis::kGlobal, t);
  });
  EXPECT_EQ(r, (std::vector<double>{4, 6, 4, 6}));
  EXPECT_EQ(c, (std::vector<double>{3, 3, 7, 7}));
  EXPECT_EQ(g, (std::vector<double>{10, 10, 10, 10}));
}

TEST_P(CommModes, AllOnesGlobalAndRowPair) {
  SimulatedGrid grid({2, 2}, Options());
  std::vector<double> g(4), c(4);
  grid.Run([&](Communicator& comm) {
    const int d = Index(comm);
    g[d] = comm.AllReduceSum(Axis::kGlobal, 1.0);
    // Grid row 0 holds {2, 5}.
    const double v = comm.coord().col == 0 ? 2.0 : 5.0;
    c[d] = comm.AllReduceSum(Axis::kColumn, v);
  });
  EXPECT_EQ(g, (std::vector<double>{4, 4, 4, 4}));
  EXPECT_EQ(c[0], 7.0);
  EXPECT_EQ(c[1], 7.0);
}

TEST_P(CommModes, SingletonIsIdentityButCounted) {
  SimulatedGrid grid({1, 1}, Options());
  std::vector<double> v = {1.5, -2.0, 3.25};
  double s = 0.0;
  grid.Run([&](Communicator& comm) {
    for (Axis a : {Axis::kRow, Axis::kColumn, Axis::kGlobal}) comm.AllReduceSum(a, v);
    s = comm.AllReduceSum(Axis::kRow, 7.0);
    comm.Barrier();
  });
  EXPECT_EQ(v, (std::vector<double>{1.5, -2.0, 3.25}));
  EXPECT_EQ(s, 7.0);
  const CommCounters& k = grid.counters()[0];
  EXPECT_EQ(k.vector_calls(), 3);
  EXPECT_EQ(k.scalar_calls(), 1);
  EXPECT_EQ(k[Axis::kRow].elements, 4);
}

TEST_P(CommModes, MatchesBruteForceInAscendingOrder) {
  std::mt19937_64 rng(21);
  for (GridTopology topo : {GridTopology{1, 3}, {3, 1}, {2, 3}, {4, 4}}) {
    const int len = 5;
    std::vector<std::vector<double>> input(topo.size(), std::vector<double>(len));
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    for (auto& v : input) for (double& e : v) e = d(rng);
    std::vector<std::vector<double>> out_r(topo.size()), out_c(topo.size()), out_g(topo.size());
    SimulatedGrid grid(topo, Options());
    grid.Run([&](Communicator& comm) {
      const int k = Index(comm);
      out_r[k] = input[k];
      comm.AllReduceSum(Axis::kRow, out_r[k]);
      out_c[k] = input[k];
      comm.AllReduceSum(Axis::kColumn, out_c[k]);
      out_g[k] = input[k];
      comm.AllReduceSum(Axis::kGlobal, out_g[k]);
    });
    for (int i = 0; i < topo.rows; ++i) {
      for (int j = 0; j < topo.cols; ++j) {
        const int k = i * topo.cols + j;
        for (int e = 0; e < len; ++e) {
          double r = 0.0, c = 0.0, g = 0.0;
          for (int ii = 0; ii < topo.rows; ++ii) r += input[ii * topo.cols + j][e];
          for (int jj = 0; jj < topo.cols; ++jj) c += input[i * topo.cols + jj][e];
          for (int kk = 0; kk < topo.size(); ++kk) g += input[kk][e];
          EXPECT_EQ(out_r[k][e], r);
          EXPECT_EQ(out_c[k][e], c);
          EXPECT_EQ(out_g[k][e], g);
        }
      }
    }
  }
}

TEST_P(CommModes, CountersAgreeAfterBarrier) {
  SimulatedGrid grid({2, 3}, Options());
  grid.Run([&](Communicator& comm) {
    std::vector<double> v(comm.coord().row + 2, 1.0);
    comm.AllReduceSum(Axis::kColumn, v);
    std::vector<double> w(3, 1.0);
    comm.AllReduceSum(Axis::kRow, w);
    comm.AllReduceSum(Axis::kGlobal, 1.0);
    comm.Barrier();
  });
  const auto& k = grid.counters();
  for (const CommCounters& c : k) {
    EXPECT_EQ(c[Axis::kColumn].vector_calls, 1);
    EXPECT_EQ(c[Axis::kRow].vector_calls, 1);
    EXPECT_EQ(c[Axis::kRow].elements, 3);
    EXPECT_EQ(c[Axis::kGlobal].scalar_calls, 1);
  }
}

TEST_P(CommModes, BarrierReleasesEveryone) {
  SimulatedGrid grid({2, 2}, Options());
  std::atomic<int> arrived{0};
  std::atomic<int> early{0};
  grid.Run([&](Communicator& comm) {
    ++arrived;
    comm.Barrier();
    if (arrived.load() != 4) ++early;
  });
  EXPECT_EQ(early.load(), 0);
}

TEST_P(CommModes, LengthMismatchIsDetected) {
  SimulatedGrid grid({1, 2}, Options());
  EXPECT_THROW(grid.Run([&](Communicator& comm) {
                 std::vector<double> v(comm.coord().col + 1, 1.0);
                 comm.AllReduceSum(Axis::kColumn, v);
               }),
               CommError);
}

TEST_P(CommModes, WorkerExceptionIsRethrownAndOthersAbort) {
  SimulatedGrid grid({2, 2}, Options());
  try {
    grid.Run([&](Communicator& comm) {
      if (Index(comm) == 3) throw std::runtime_error("boom");
      comm.AllReduceSum(Axis::kGlobal, 1.0);
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "boom");
  }
}

TEST_P(CommModes, DeterministicAcrossRuns) {
  auto run = [&] {
    SimulatedGrid grid({3, 2}, Options());
    std::vector<double> out(6);
    grid.Run([&](Communicator& comm) {
      const int k = Index(comm);
      std::vector<double> v = {0.1 * (k + 1), 1e-17 * k, 1.0 / (k + 3)};
      comm.AllReduceSum(Axis::kGlobal, v);
      out[k] = v[0] + v[1] + v[2];
    });
    return out;
  };
  EXPECT_EQ(run(), run());
}

INSTANTIATE_TEST_SUITE_P(Backends, CommModes,
                         ::testing::Values(ExecutionMode::kFibers, ExecutionMode::kThreads));

TEST(SimulatedGrid, StalledDeviceTimesOut) {
  SimulatedGridOptions o;
  o.mode = ExecutionMode::kThreads;
  o.timeout = std::chrono::milliseconds(200);
  SimulatedGrid grid({1, 2}, o);
  EXPECT_THROW(grid.Run([&](Communicator& comm) {
                 if (comm.coord().col == 0) comm.AllReduceSum(Axis::kColumn, 1.0);
                 else comm.AllReduceSum(Axis::kGlobal, 1.0);
               }),
               CommError);
}

TEST(SimulatedGrid, RejectsEmptyTopology) {
  EXPECT_THROW(SimulatedGrid({0, 2}), std::invalid_argument);
}

TEST(CommCounters, Difference) {
  CommCounters a, b;
  a[Axis::kRow].vector_calls = 5;
  a[Axis::kRow].elements = 50;
  b[Axis::kRow].vector_calls = 2;
  b[Axis::kRow].elements = 20;
  const CommCounters d = a - b;
  EXPECT_EQ(d[Axis::kRow].vector_calls, 3);
  EXPECT_EQ(d[Axis::kRow].elements, 30);
  EXPECT_EQ(d.scalar_calls(), 0);
}

}  // namespace
}  // namespace gridpdlp

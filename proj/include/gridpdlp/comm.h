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

// Axis-scoped sum-AllReduce over a 2D logical device grid.
//
// A device at grid coordinate (i, j) belongs to three groups:
//   Axis::kRow     - devices (0..|R|-1, j): the reduction runs over the row
//                    axis R, i.e. down grid column j.
//   Axis::kColumn  - devices (i, 0..|C|-1): the reduction runs over the column
//                    axis C, i.e. across grid row i.
//   Axis::kGlobal  - every device.
// Sums are accumulated in ascending device order (row-major for kGlobal), so
// every member receives bit-identical results and reruns are reproducible.

#ifndef GRIDPDLP_COMM_H_
#define GRIDPDLP_COMM_H_

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridpdlp {

struct GridTopology {
  int rows = 1;  // |R|
  int cols = 1;  // |C|
  int size() const { return rows * cols; }
  friend bool operator==(const GridTopology&, const GridTopology&) = default;
};

struct GridCoord {
  int row = 0;
  int col = 0;
  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

enum class Axis { kRow = 0, kColumn = 1, kGlobal = 2 };

const char* AxisName(Axis axis);  // "R", "C", "G"

struct AxisTally {
  int64_t vector_calls = 0;
  int64_t scalar_calls = 0;
  int64_t elements = 0;  // FP64 words contributed
  friend bool operator==(const AxisTally&, const AxisTally&) = default;
};

struct CommCounters {
  std::array<AxisTally, 3> per_axis;

  AxisTally& operator[](Axis axis) { return per_axis[static_cast<int>(axis)]; }
  const AxisTally& operator[](Axis axis) const {
    return per_axis[static_cast<int>(axis)];
  }
  int64_t vector_calls() const;
  int64_t scalar_calls() const;
  int64_t elements() const;

  CommCounters operator-(const CommCounters& other) const;
  friend bool operator==(const CommCounters&, const CommCounters&) = default;
};

// A collective failed: mismatched call sequence or length, a timeout, or
// another device aborted the run.
class CommError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Communicator {
 public:
  virtual ~Communicator() = default;

  virtual GridTopology topology() const = 0;
  virtual GridCoord coord() const = 0;

  // In-place sum over the axis group. Every member must call with the same
  // length, in the same order relative to its other calls on that axis.
  void AllReduceSum(Axis axis, std::span<double> data);

  // Same contract for one value; tallied as scalar traffic.
  double AllReduceSum(Axis axis, double value);

  // Returns once every device of the grid has entered the barrier.
  void Barrier();

  const CommCounters& counters() const { return counters_; }

  // Number of devices in this device's group for `axis`.
  int GroupSize(Axis axis) const;

 protected:
  enum class OpKind { kVector, kScalar, kBarrier };
  virtual void Reduce(Axis axis, OpKind kind, std::span<double> data) = 0;

 private:
  CommCounters counters_;
};

enum class ExecutionMode {
  kFibers,   // cooperative fibers on the calling thread
  kThreads,  // one OS thread per device
};

struct SimulatedGridOptions {
  ExecutionMode mode = ExecutionMode::kFibers;
  // A device that has not joined a collective within this time aborts the
  // whole run with a CommError naming the stalled group.
  std::chrono::milliseconds timeout{60000};
};

// In-process backend: one logical worker per grid coordinate, collectives
// implemented as rendezvous points.
class SimulatedGrid {
 public:
  explicit SimulatedGrid(GridTopology topology,
                         SimulatedGridOptions options = {});
  ~SimulatedGrid();

  SimulatedGrid(const SimulatedGrid&) = delete;
  SimulatedGrid& operator=(const SimulatedGrid&) = delete;

  GridTopology topology() const { return topology_; }

  // Runs `worker` once per device and waits for all of them. If any worker
  // throws, the remaining collectives are aborted and the first exception
  // (not the follow-on aborts) is rethrown. Counters of each device's
  // communicator are kept and can be read with counters() afterwards.
  void Run(const std::function<void(Communicator&)>& worker);

  // Counters per device in row-major order, from the last Run().
  const std::vector<CommCounters>& counters() const { return counters_; }

 private:
  GridTopology topology_;
  SimulatedGridOptions options_;
  std::vector<CommCounters> counters_;
};

}  // namespace gridpdlp

#endif  // GRIDPDLP_COMM_H_

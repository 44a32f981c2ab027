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

#include <boost/fiber/all.hpp>

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gridpdlp {

const char* AxisName(Axis axis) {
  switch (axis) {
    case Axis::kRow: return "R";
    case Axis::kColumn: return "C";
    case Axis::kGlobal: return "G";
  }
  return "?";
}

int64_t CommCounters::vector_calls() const {
  int64_t total = 0;
  for (const auto& t : per_axis) total += t.vector_calls;
  return total;
}

int64_t CommCounters::scalar_calls() const {
  int64_t total = 0;
  for (const auto& t : per_axis) total += t.scalar_calls;
  return total;
}

int64_t CommCounters::elements() const {
  int64_t total = 0;
  for (const auto& t : per_axis) total += t.elements;
  return total;
}

CommCounters CommCounters::operator-(const CommCounters& other) const {
  CommCounters d;
  for (int a = 0; a < 3; ++a) {
    d.per_axis[a].vector_calls = per_axis[a].vector_calls - other.per_axis[a].vector_calls;
    d.per_axis[a].scalar_calls = per_axis[a].scalar_calls - other.per_axis[a].scalar_calls;
    d.per_axis[a].elements = per_axis[a].elements - other.per_axis[a].elements;
  }
  return d;
}

void Communicator::AllReduceSum(Axis axis, std::span<double> data) {
  AxisTally& tally = counters_[axis];
  ++tally.vector_calls;
  tally.elements += static_cast<int64_t>(data.size());
  Reduce(axis, OpKind::kVector, data);
}

double Communicator::AllReduceSum(Axis axis, double value) {
  AxisTally& tally = counters_[axis];
  ++tally.scalar_calls;
  ++tally.elements;
  Reduce(axis, OpKind::kScalar, std::span<double>(&value, 1));
  return value;
}

void Communicator::Barrier() { Reduce(Axis::kGlobal, OpKind::kBarrier, {}); }

int Communicator::GroupSize(Axis axis) const {
  const GridTopology t = topology();
  switch (axis) {
    case Axis::kRow: return t.rows;
    case Axis::kColumn: return t.cols;
    case Axis::kGlobal: return t.size();
  }
  return 0;
}

namespace {

struct ThreadSync {
  using Mutex = std::mutex;
  using CondVar = std::condition_variable;
};

struct FiberSync {
  using Mutex = boost::fibers::mutex;
  using CondVar = boost::fibers::condition_variable;
};

// Raised in devices that were blocked when another device failed; the
// original failure is reported instead.
class CommAborted : public CommError {
 public:
  using CommError::CommError;
};

// One rendezvous point. A round collects one contribution per member, then
// every member sums the slots in ascending member order. The next round can
// only start once all members have read the current one.
template <class Sync>
class ReductionGroup {
 public:
  ReductionGroup(int size, std::string label, std::chrono::milliseconds timeout)
      : size_(size), label_(std::move(label)), timeout_(timeout), slots_(size) {}

  void Reduce(int member, uint64_t seq, int kind, std::span<double> data) {
    std::unique_lock<typename Sync::Mutex> lock(mu_);
    Wait(lock, [&] { return !draining_ || aborted_; }, "the previous round");
    ThrowIfAborted();
    if (arrived_ == 0) {
      round_seq_ = seq;
      round_kind_ = kind;
      round_len_ = data.size();
    } else if (seq != round_seq_ || kind != round_kind_ ||
               data.size() != round_len_) {
      const std::string msg =
          label_ + ": mismatched collective (sequence " + std::to_string(seq) +
          " vs " + std::to_string(round_seq_) + ", length " +
          std::to_string(data.size()) + " vs " + std::to_string(round_len_) + ")";
      AbortLocked(msg);
      throw CommError(msg);
    }
    slots_[member].assign(data.begin(), data.end());
    const uint64_t my_round = round_;
    if (++arrived_ == size_) {
      draining_ = true;
      cv_.notify_all();
    } else {
      Wait(lock, [&] { return (draining_ && round_ == my_round) || aborted_; },
           "all members to arrive");
      ThrowIfAborted();
    }
    lock.unlock();

    const size_t len = data.size();
    std::copy(slots_[0].begin(), slots_[0].end(), data.begin());
    for (int k = 1; k < size_; ++k) {
      const double* src = slots_[k].data();
      for (size_t e = 0; e < len; ++e) data[e] += src[e];
    }

    lock.lock();
    if (++departed_ == size_) {
      arrived_ = 0;
      departed_ = 0;
      draining_ = false;
      ++round_;
      cv_.notify_all();
    }
  }

  void Abort(const std::string& message) {
    std::unique_lock<typename Sync::Mutex> lock(mu_);
    AbortLocked(message);
  }

 private:
  template <class Pred>
  void Wait(std::unique_lock<typename Sync::Mutex>& lock, Pred pred,
            const char* what) {
    if (!cv_.wait_for(lock, timeout_, pred)) {
      const std::string msg = label_ + ": timed out after " +
                              std::to_string(timeout_.count()) +
                              " ms waiting for " + what;
      AbortLocked(msg);
      throw CommError(msg);
    }
  }

  void AbortLocked(const std::string& message) {
    if (!aborted_) {
      aborted_ = true;
      abort_message_ = message;
    }
    cv_.notify_all();
  }

  void ThrowIfAborted() const {
    if (aborted_) throw CommAborted(label_ + " aborted: " + abort_message_);
  }

  const int size_;
  const std::string label_;
  const std::chrono::milliseconds timeout_;
  typename Sync::Mutex mu_;
  typename Sync::CondVar cv_;
  std::vector<std::vector<double>> slots_;
  int arrived_ = 0;
  int departed_ = 0;
  bool draining_ = false;
  uint64_t round_ = 0;
  uint64_t round_seq_ = 0;
  int round_kind_ = 0;
  size_t round_len_ = 0;
  bool aborted_ = false;
  std::string abort_message_;
};

template <class Sync>
class GroupSet {
 public:
  GroupSet(GridTopology t, std::chrono::milliseconds timeout) : topology_(t) {
    for (int j = 0; j < t.cols; ++j) {
      column_groups_.push_back(std::make_unique<ReductionGroup<Sync>>(
          t.rows, "AllReduce_R[grid column " + std::to_string(j) + "]", timeout));
    }
    for (int i = 0; i < t.rows; ++i) {
      row_groups_.push_back(std::make_unique<ReductionGroup<Sync>>(
          t.cols, "AllReduce_C[grid row " + std::to_string(i) + "]", timeout));
    }
    global_ = std::make_unique<ReductionGroup<Sync>>(t.size(), "AllReduce_G",
                                                     timeout);
  }

  ReductionGroup<Sync>& Group(Axis axis, GridCoord c) {
    switch (axis) {
      case Axis::kRow: return *column_groups_[c.col];
      case Axis::kColumn: return *row_groups_[c.row];
      case Axis::kGlobal: break;
    }
    return *global_;
  }

  void AbortAll(const std::string& message) {
    for (auto& g : column_groups_) g->Abort(message);
    for (auto& g : row_groups_) g->Abort(message);
    global_->Abort(message);
  }

 private:
  GridTopology topology_;
  std::vector<std::unique_ptr<ReductionGroup<Sync>>> column_groups_;
  std::vector<std::unique_ptr<ReductionGroup<Sync>>> row_groups_;
  std::unique_ptr<ReductionGroup<Sync>> global_;
};

template <class Sync>
class SimulatedCommunicator final : public Communicator {
 public:
  SimulatedCommunicator(GroupSet<Sync>* groups, GridTopology t, GridCoord c)
      : groups_(groups), topology_(t), coord_(c) {}

  GridTopology topology() const override { return topology_; }
  GridCoord coord() const override { return coord_; }

 protected:
  void Reduce(Axis axis, OpKind kind, std::span<double> data) override {
    const int group_size = GroupSize(axis);
    uint64_t& seq = seq_[static_cast<int>(axis)];
    const uint64_t my_seq = seq++;
    if (group_size == 1) return;  // singleton: the sum is the input
    int member = 0;
    switch (axis) {
      case Axis::kRow: member = coord_.row; break;
      case Axis::kColumn: member = coord_.col; break;
      case Axis::kGlobal: member = coord_.row * topology_.cols + coord_.col; break;
    }
    groups_->Group(axis, coord_).Reduce(member, my_seq, static_cast<int>(kind),
                                        data);
  }

 private:
  GroupSet<Sync>* groups_;
  GridTopology topology_;
  GridCoord coord_;
  std::array<uint64_t, 3> seq_{};
};

template <class Sync>
std::vector<CommCounters> RunGrid(
    GridTopology t, const SimulatedGridOptions& options,
    const std::function<void(Communicator&)>& worker) {
  GroupSet<Sync> groups(t, options.timeout);
  std::vector<std::unique_ptr<SimulatedCommunicator<Sync>>> comms;
  for (int i = 0; i < t.rows; ++i) {
    for (int j = 0; j < t.cols; ++j) {
      comms.push_back(
          std::make_unique<SimulatedCommunicator<Sync>>(&groups, t, GridCoord{i, j}));
    }
  }
  std::mutex error_mu;
  std::exception_ptr first_error;
  std::exception_ptr first_abort;
  auto body = [&](int d) {
    try {
      worker(*comms[d]);
    } catch (const CommAborted&) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!first_abort) first_abort = std::current_exception();
    } catch (const std::exception& e) {
      {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
      groups.AbortAll(std::string("device failed: ") + e.what());
    } catch (...) {
      {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
      groups.AbortAll("device failed with a non-standard exception");
    }
  };

  if constexpr (std::is_same_v<Sync, FiberSync>) {
    std::vector<boost::fibers::fiber> fibers;
    fibers.reserve(comms.size());
    for (int d = 0; d < static_cast<int>(comms.size()); ++d) {
      fibers.emplace_back(std::allocator_arg,
                          boost::fibers::fixedsize_stack(512 * 1024),
                          [&body, d] { body(d); });
    }
    for (auto& f : fibers) f.join();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(comms.size());
    for (int d = 0; d < static_cast<int>(comms.size()); ++d) {
      threads.emplace_back([&body, d] { body(d); });
    }
    for (auto& th : threads) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  if (first_abort) std::rethrow_exception(first_abort);

  std::vector<CommCounters> counters;
  counters.reserve(comms.size());
  for (const auto& c : comms) counters.push_back(c->counters());
  return counters;
}

}  // namespace

SimulatedGrid::SimulatedGrid(GridTopology topology, SimulatedGridOptions options)
    : topology_(topology), options_(options) {
  if (topology.rows < 1 || topology.cols < 1) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
}

SimulatedGrid::~SimulatedGrid() = default;

void SimulatedGrid::Run(const std::function<void(Communicator&)>& worker) {
  counters_.clear();
  if (options_.mode == ExecutionMode::kFibers) {
    counters_ = RunGrid<FiberSync>(topology_, options_, worker);
  } else {
    counters_ = RunGrid<ThreadSync>(topology_, options_, worker);
  }
}

}  // namespace gridpdlp

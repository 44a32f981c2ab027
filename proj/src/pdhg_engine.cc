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

#include "gridpdlp/pdhg_engine.h"

#include <chrono>
#include <limits>

#include <fmt/format.h>

#include "gridpdlp/sparse_kernels.h"
#include "gridpdlp/spectral_norm.h"

namespace gridpdlp {

const char* ToString(RestartReason reason) {
  switch (reason) {
    case RestartReason::kNone: return "none";
    case RestartReason::kSufficientDecay: return "sufficient";
    case RestartReason::kNecessaryDecay: return "necessary";
    case RestartReason::kArtificial: return "artificial";
  }
  return "?";
}

const char* ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kIterationLimit: return "iteration_limit";
    case SolveStatus::kTimeLimit: return "time_limit";
    case SolveStatus::kNumericalFailure: return "numerical_failure";
  }
  return "?";
}

RestartReason RestartDecision(const RestartParams& params, double r_current,
                              double r_previous, double r_initial,
                              int64_t epoch_iterations,
                              int64_t total_iterations) {
  if (r_current <= params.beta_sufficient * r_initial) {
    return RestartReason::kSufficientDecay;
  }
  if (r_current <= params.beta_necessary * r_initial && r_current > r_previous) {
    return RestartReason::kNecessaryDecay;
  }
  if (static_cast<double>(epoch_iterations) >=
      params.beta_artificial * static_cast<double>(total_iterations)) {
    return RestartReason::kArtificial;
  }
  return RestartReason::kNone;
}

double PidWeightUpdate(const PidParams& params, PidState& state, double d_x,
                       double d_y, double omega) {
  if (!(d_x > 0.0) || !(d_y > 0.0)) return omega;
  const double root = std::sqrt(omega);
  const double error = std::log((root * d_x) / (d_y / root));
  state.integral += error;
  const double derivative =
      state.has_last_error ? error - state.last_error : 0.0;
  state.last_error = error;
  state.has_last_error = true;
  const double log_omega = std::log(omega) - (params.kp * error +
                                              params.ki * state.integral +
                                              params.kd * derivative);
  return std::clamp(std::exp(log_omega), params.omega_min, params.omega_max);
}

HalpernWeights HalpernCoefficients(double gamma, int64_t k) {
  const double k1 = static_cast<double>(k + 1);
  const double k2 = static_cast<double>(k + 2);
  return {(1.0 + gamma) * k1 / k2, gamma, 1.0 / k2};
}

double BoundPenalty(double q, double lower, double upper) {
  const double plus = std::max(q, 0.0);
  const double minus = std::max(-q, 0.0);
  const double up = plus == 0.0 ? 0.0 : upper * plus;
  const double lo = minus == 0.0 ? 0.0 : lower * minus;
  return up - lo;
}

void DeviceState::Initialize(const LocalBlock& block, std::vector<double> x0,
                             std::vector<double> y0) {
  GRIDPDLP_CHECK(static_cast<int64_t>(x0.size()) == block.num_cols(),
                 "DeviceState: x0 size");
  GRIDPDLP_CHECK(static_cast<int64_t>(y0.size()) == block.num_rows(),
                 "DeviceState: y0 size");
  x = std::move(x0);
  y = std::move(y0);
  x_anchor = x;
  y_anchor = y;
  x_image.assign(x.size(), 0.0);
  y_image.assign(y.size(), 0.0);
  aty.assign(x.size(), 0.0);
  col_work.assign(x.size(), 0.0);
  row_work.assign(y.size(), 0.0);
  inner_k = 0;
  epoch = 0;
  pid = {};
}

void PrimalStep(const LocalBlock& block, DeviceState& st, Communicator& comm) {
  SpMVTranspose(block.a_transpose, st.y, st.aty);
  comm.AllReduceSum(Axis::kRow, st.aty);
  const double tau = st.step.tau();
  for (size_t j = 0; j < st.x.size(); ++j) {
    st.x_image[j] = PrimalUpdate(st.x[j], block.objective[j], st.aty[j],
                                 block.var_lower[j], block.var_upper[j], tau);
  }
}

void DualStep(const LocalBlock& block, DeviceState& st, Communicator& comm) {
  for (size_t j = 0; j < st.x.size(); ++j) {
    st.col_work[j] = 2.0 * st.x_image[j] - st.x[j];
  }
  SpMV(block.a, st.col_work, st.row_work);
  comm.AllReduceSum(Axis::kColumn, st.row_work);
  const double sigma = st.step.sigma();
  for (size_t i = 0; i < st.y.size(); ++i) {
    st.y_image[i] = DualUpdate(st.y[i], st.row_work[i], block.con_lower[i],
                               block.con_upper[i], sigma);
  }
}

void HalpernStep(DeviceState& st) {
  const HalpernWeights w = HalpernCoefficients(st.gamma, st.inner_k);
  for (size_t j = 0; j < st.x.size(); ++j) {
    st.x[j] = HalpernUpdate(w, st.x_image[j], st.x[j], st.x_anchor[j]);
  }
  for (size_t i = 0; i < st.y.size(); ++i) {
    st.y[i] = HalpernUpdate(w, st.y_image[i], st.y[i], st.y_anchor[i]);
  }
  ++st.inner_k;
}

namespace {

// Squared P-norm from globally reduced pieces.
double PNormFromParts(const StepSizes& step, double dx2, double dy2,
                      double interaction) {
  const double value = (step.omega / step.eta) * dx2 +
                       (1.0 / (step.eta * step.omega)) * dy2 +
                       2.0 * interaction;
  // NaN propagates through max(0, NaN) only if it is the first argument.
  if (std::isnan(value)) return value;
  return std::sqrt(std::max(0.0, value));
}

}  // namespace

double FixedPointError(const StepSizes& step, std::span<const double> dx,
                       std::span<const double> dy,
                       std::span<const double> a_dx_local, Communicator& comm) {
  // dx[j] lives on |R| devices and dy[i] on |C| devices, so their squared
  // norms are divided by the replication factor before the global sum. Each
  // block A[i,j] appears exactly once, so the interaction needs no scaling.
  const double rows = comm.GroupSize(Axis::kRow);
  const double cols = comm.GroupSize(Axis::kColumn);
  const double dx2 = comm.AllReduceSum(Axis::kGlobal, SquaredNorm(dx) / rows);
  const double dy2 = comm.AllReduceSum(Axis::kGlobal, SquaredNorm(dy) / cols);
  const double inter = comm.AllReduceSum(Axis::kGlobal, Dot(a_dx_local, dy));
  return PNormFromParts(step, dx2, dy2, inter);
}

KktReport EvaluateKkt(const LocalBlock& block, std::span<const double> x,
                      std::span<const double> y, const StepSizes& step,
                      const ProblemScalars& scalars, Communicator& comm) {
  const size_t n = x.size();
  const size_t m = y.size();
  std::vector<double> aty = SpMVTranspose(block.a_transpose, y);
  comm.AllReduceSum(Axis::kRow, aty);
  std::vector<double> ax = SpMV(block.a, x);
  comm.AllReduceSum(Axis::kColumn, ax);

  double rp_local = 0.0;
  double p_local = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double r =
        ax[i] - std::clamp(ax[i], block.con_lower[i], block.con_upper[i]);
    rp_local += r * r;
    p_local += BoundPenalty(-y[i], block.con_lower[i], block.con_upper[i]);
  }

  const double tau = step.tau();
  double rd_local = 0.0;
  double cx_local = 0.0;
  double sx_local = 0.0;
  for (size_t j = 0; j < n; ++j) {
    const double g = block.objective[j] - aty[j];
    const double t = x[j] - tau * g;
    const double p = std::clamp(t, block.var_lower[j], block.var_upper[j]);
    const double d = (p - x[j]) / tau;
    rd_local += d * d;
    // s = (p - t)/tau is the reduced cost, nonzero only at active bounds.
    const double s = (p - t) / tau;
    sx_local += s * x[j];
    cx_local += block.objective[j] * x[j];
  }

  const double rp2 = comm.AllReduceSum(Axis::kRow, rp_local);
  const double rd2 = comm.AllReduceSum(Axis::kColumn, rd_local);
  const double cx = comm.AllReduceSum(Axis::kColumn, cx_local);
  const double sx = comm.AllReduceSum(Axis::kColumn, sx_local);
  const double penalty = comm.AllReduceSum(Axis::kRow, p_local);

  KktReport report;
  report.r_primal = std::sqrt(rp2) / (1.0 + scalars.bound_norm);
  report.r_dual = std::sqrt(rd2) / (1.0 + scalars.objective_norm);
  const double dual_obj = -penalty + sx;
  if (std::isnan(dual_obj) || std::isnan(cx)) {
    report.r_gap = std::numeric_limits<double>::quiet_NaN();
  } else if (!std::isfinite(dual_obj)) {
    report.r_gap = kInfinity;
  } else {
    report.r_gap = std::abs(cx - dual_obj) /
                   (1.0 + std::max(std::abs(cx), std::abs(dual_obj)));
  }
  report.obj_primal = cx + scalars.objective_constant;
  report.obj_dual = dual_obj + scalars.objective_constant;
  return report;
}

AnchorDistances ComputeAnchorDistances(const LocalBlock& block,
                                       std::span<const double> x,
                                       std::span<const double> y,
                                       std::span<const double> x0,
                                       std::span<const double> y0,
                                       const StepSizes& step,
                                       Communicator& comm) {
  std::vector<double> dx(x.size());
  std::vector<double> dy(y.size());
  for (size_t j = 0; j < dx.size(); ++j) dx[j] = x[j] - x0[j];
  for (size_t i = 0; i < dy.size(); ++i) dy[i] = y[i] - y0[i];
  std::vector<double> a_dx = SpMV(block.a, dx);
  comm.AllReduceSum(Axis::kColumn, a_dx);

  const double rows = comm.GroupSize(Axis::kRow);
  const double cols = comm.GroupSize(Axis::kColumn);
  const double dx2 = comm.AllReduceSum(Axis::kGlobal, SquaredNorm(dx) / rows);
  const double dy2 = comm.AllReduceSum(Axis::kGlobal, SquaredNorm(dy) / cols);
  // a_dx is now the full row-range product, so sum over row ranges only.
  const double inter = comm.AllReduceSum(Axis::kRow, Dot(a_dx, dy));

  AnchorDistances d;
  d.d_x = std::sqrt(dx2);
  d.d_y = std::sqrt(dy2);
  d.p_distance = PNormFromParts(step, dx2, dy2, inter);
  return d;
}

ProblemScalars ComputeProblemScalars(const LocalBlock& block,
                                     double objective_constant,
                                     Communicator& comm) {
  double bounds_local = 0.0;
  for (size_t i = 0; i < block.con_lower.size(); ++i) {
    if (std::isfinite(block.con_lower[i])) {
      bounds_local += block.con_lower[i] * block.con_lower[i];
    }
    if (std::isfinite(block.con_upper[i])) {
      bounds_local += block.con_upper[i] * block.con_upper[i];
    }
  }
  ProblemScalars s;
  s.objective_norm = std::sqrt(
      comm.AllReduceSum(Axis::kColumn, SquaredNorm(block.objective)));
  s.bound_norm = std::sqrt(comm.AllReduceSum(Axis::kRow, bounds_local));
  s.objective_constant = objective_constant;
  return s;
}

StepSizes InitialStepSizes(double spectral_norm, const ProblemScalars& scalars,
                           double step_size_factor) {
  StepSizes step;
  step.eta = spectral_norm > 0.0 ? step_size_factor / spectral_norm : 1.0;
  step.omega = (scalars.objective_norm > 0.0 && scalars.bound_norm > 0.0)
                   ? scalars.objective_norm / scalars.bound_norm
                   : 1.0;
  return step;
}

std::string FormatKktLogLine(const KktLogEntry& e) {
  return fmt::format("{:>8d} {:.6e} {:.6e} {:.6e} {:.10e} {:.10e} {:.4e} {:.4e} {:d}",
                     e.iteration, e.report.r_primal, e.report.r_dual,
                     e.report.r_gap, e.report.obj_primal, e.report.obj_dual,
                     e.omega, e.eta, e.epoch);
}

namespace {

bool IsNumericalFailure(const KktReport& r, double fixed_point_error) {
  return !std::isfinite(r.r_primal) || !std::isfinite(r.r_dual) ||
         std::isnan(r.r_gap) || !std::isfinite(r.obj_primal) ||
         !std::isfinite(fixed_point_error);
}

}  // namespace

DeviceResult RunDevice(const LocalBlock& block, const EngineConfig& config,
                       double objective_constant, std::vector<double> x0,
                       std::vector<double> y0, Communicator& comm) {
  GRIDPDLP_CHECK(config.kkt_interval >= 1, "RunDevice: kkt_interval >= 1");
  GRIDPDLP_CHECK(config.max_iterations >= 0, "RunDevice: max_iterations >= 0");
  const auto start = std::chrono::steady_clock::now();
  const bool log_here =
      config.on_kkt && comm.coord() == GridCoord{0, 0};

  DeviceResult result;
  result.spectral_norm =
      EstimateSpectralNorm(block, comm, config.power_iterations);
  const ProblemScalars scalars =
      ComputeProblemScalars(block, objective_constant, comm);

  DeviceState st;
  st.Initialize(block, std::move(x0), std::move(y0));
  st.step = InitialStepSizes(result.spectral_norm, scalars,
                             config.step_size_factor);
  st.gamma = config.gamma;
  result.setup_counters = comm.counters();

  // Restart bookkeeping: r(z^{n,0}) and the error at the previous check.
  double r_initial = -1.0;
  double r_previous = 0.0;
  const bool timed = std::isfinite(config.time_limit_seconds);

  // The last evaluated point and its report.
  std::vector<double> best_x = st.x;
  std::vector<double> best_y = st.y;
  KktReport best_report;
  bool have_report = false;
  bool last_was_check = false;

  int64_t t = 0;
  for (; t < config.max_iterations; ++t) {
    PrimalStep(block, st, comm);
    DualStep(block, st, comm);
    const int64_t total = t + 1;
    last_was_check = total % config.kkt_interval == 0;

    RestartReason restart = RestartReason::kNone;
    AnchorDistances anchor;
    double fp_error = 0.0;
    if (last_was_check) {
      const KktReport report =
          EvaluateKkt(block, st.x_image, st.y_image, st.step, scalars, comm);
      for (size_t j = 0; j < st.x.size(); ++j) {
        st.col_work[j] = st.x[j] - st.x_image[j];
      }
      for (size_t i = 0; i < st.y.size(); ++i) {
        st.row_work[i] = st.y[i] - st.y_image[i];
      }
      std::vector<double> a_dx = SpMV(block.a, st.col_work);
      fp_error = FixedPointError(st.step, st.col_work, st.row_work, a_dx, comm);
      anchor = ComputeAnchorDistances(block, st.x_image, st.y_image,
                                      st.x_anchor, st.y_anchor, st.step, comm);
      best_x = st.x_image;
      best_y = st.y_image;
      best_report = report;
      have_report = true;

      if (config.enable_restarts) {
        if (r_initial < 0.0) {
          r_initial = fp_error;
          r_previous = fp_error;
        }
        restart = RestartDecision(config.restart, fp_error, r_previous,
                                  r_initial, st.inner_k + 1, total);
        r_previous = fp_error;
      }

      if (log_here) {
        KktLogEntry entry;
        entry.iteration = total;
        entry.report = report;
        entry.omega = st.step.omega;
        entry.eta = st.step.eta;
        entry.epoch = st.epoch;
        entry.fixed_point_error = fp_error;
        entry.anchor_distance = anchor.p_distance;
        entry.restart = restart;
        config.on_kkt(entry);
      }

      if (IsNumericalFailure(report, fp_error)) {
        result.status = SolveStatus::kNumericalFailure;
        ++t;
        break;
      }
      if (report.overall() <= config.tolerance) {
        result.status = SolveStatus::kOptimal;
        ++t;
        break;
      }
      if (timed) {
        const double elapsed = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
        const double over = elapsed > config.time_limit_seconds ? 1.0 : 0.0;
        if (comm.AllReduceSum(Axis::kGlobal, over) > 0.0) {
          result.status = SolveStatus::kTimeLimit;
          ++t;
          break;
        }
      }
    }

    if (restart != RestartReason::kNone) {
      if (config.enable_pid) {
        st.step.omega = PidWeightUpdate(config.pid, st.pid, anchor.d_x,
                                        anchor.d_y, st.step.omega);
      }
      st.x = st.x_image;
      st.y = st.y_image;
      st.x_anchor = st.x;
      st.y_anchor = st.y;
      st.inner_k = 0;
      ++st.epoch;
      r_initial = fp_error;
    } else if (config.use_halpern) {
      HalpernStep(st);
    } else {
      st.x = st.x_image;
      st.y = st.y_image;
      ++st.inner_k;
    }

    if (total <= config.record_iterates) {
      result.x_trace.push_back(st.x);
      result.y_trace.push_back(st.y);
    }
  }

  result.iterations = t;
  result.restarts = st.epoch;
  result.final_step = st.step;
  if (result.status == SolveStatus::kIterationLimit &&
      (!have_report || !last_was_check)) {
    // The limit fell between checks: report on the current iterate.
    best_report = EvaluateKkt(block, st.x, st.y, st.step, scalars, comm);
    best_x = st.x;
    best_y = st.y;
  }
  result.x = std::move(best_x);
  result.y = std::move(best_y);
  result.report = best_report;
  return result;
}

}  // namespace gridpdlp

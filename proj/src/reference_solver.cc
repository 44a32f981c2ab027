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

#include "gridpdlp/reference_solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "gridpdlp/partition.h"
#include "gridpdlp/sparse_kernels.h"

namespace gridpdlp {
namespace {

double Clamp(double v, double lo, double hi) { return std::clamp(v, lo, hi); }

// u q+ - l q-, where a zero part never multiplies an infinite bound.
double Penalty(double q, double lo, double hi) {
  double value = 0.0;
  if (q > 0.0) value += hi * q;
  if (q < 0.0) value -= lo * -q;
  return value;
}

struct Normalizers {
  double c_norm = 0.0;
  double b_norm = 0.0;
};

Normalizers ComputeNormalizers(const LpProblem& p) {
  Normalizers n;
  n.c_norm = std::sqrt(SquaredNorm(p.objective));
  double b = 0.0;
  for (int64_t i = 0; i < p.num_constraints(); ++i) {
    if (std::isfinite(p.con_lower[i])) b += p.con_lower[i] * p.con_lower[i];
    if (std::isfinite(p.con_upper[i])) b += p.con_upper[i] * p.con_upper[i];
  }
  n.b_norm = std::sqrt(b);
  return n;
}

KktReport Kkt(const LpProblem& p, const SparseMatrix& at,
              const Normalizers& norms, std::span<const double> x,
              std::span<const double> y, const StepSizes& step) {
  const int64_t m = p.num_constraints();
  const int64_t n = p.num_variables();
  const std::vector<double> aty = SpMV(at, y);
  const std::vector<double> ax = SpMV(p.matrix, x);

  double rp2 = 0.0;
  double penalty = 0.0;
  for (int64_t i = 0; i < m; ++i) {
    const double r = ax[i] - Clamp(ax[i], p.con_lower[i], p.con_upper[i]);
    rp2 += r * r;
    penalty += Penalty(-y[i], p.con_lower[i], p.con_upper[i]);
  }
  const double tau = step.eta / step.omega;
  double rd2 = 0.0;
  double cx = 0.0;
  double sx = 0.0;
  for (int64_t j = 0; j < n; ++j) {
    const double g = p.objective[j] - aty[j];
    const double t = x[j] - tau * g;
    const double proj = Clamp(t, p.var_lower[j], p.var_upper[j]);
    const double d = (proj - x[j]) / tau;
    rd2 += d * d;
    sx += ((proj - t) / tau) * x[j];
    cx += p.objective[j] * x[j];
  }

  KktReport r;
  r.r_primal = std::sqrt(rp2) / (1.0 + norms.b_norm);
  r.r_dual = std::sqrt(rd2) / (1.0 + norms.c_norm);
  const double dual = -penalty + sx;
  if (std::isnan(dual) || std::isnan(cx)) {
    r.r_gap = std::numeric_limits<double>::quiet_NaN();
  } else if (!std::isfinite(dual)) {
    r.r_gap = kInfinity;
  } else {
    r.r_gap = std::abs(cx - dual) /
              (1.0 + std::max(std::abs(cx), std::abs(dual)));
  }
  r.obj_primal = cx + p.objective_constant;
  r.obj_dual = dual + p.objective_constant;
  return r;
}

// sqrt(max(0, omega/eta |dx|^2 + |dy|^2/(eta omega) + 2 <A dx, dy>)).
double PNorm(const SparseMatrix& a, const StepSizes& step,
             std::span<const double> dx, std::span<const double> dy) {
  const std::vector<double> a_dx = SpMV(a, dx);
  const double v = (step.omega / step.eta) * SquaredNorm(dx) +
                   (1.0 / (step.eta * step.omega)) * SquaredNorm(dy) +
                   2.0 * Dot(a_dx, dy);
  if (std::isnan(v)) return v;
  return std::sqrt(std::max(0.0, v));
}

}  // namespace

KktReport EvaluateKktDense(const LpProblem& problem, std::span<const double> x,
                           std::span<const double> y, const StepSizes& step) {
  GRIDPDLP_CHECK(static_cast<int64_t>(x.size()) == problem.num_variables(),
                 "EvaluateKktDense: x size");
  GRIDPDLP_CHECK(static_cast<int64_t>(y.size()) == problem.num_constraints(),
                 "EvaluateKktDense: y size");
  return Kkt(problem, Transpose(problem.matrix), ComputeNormalizers(problem), x,
             y, step);
}

SolveResult ReferenceSolve(const LpProblem& original, const SolverConfig& config) {
  original.Validate();
  const auto start = std::chrono::steady_clock::now();
  LayoutOptions lo = config.layout_options();
  lo.num_procs = 1;
  lo.grid = GridTopology{1, 1};
  const PartitionLayout layout = BuildLayout(original, lo);
  const LpProblem p = PermuteProblem(original, layout);
  const EngineConfig& cfg = config.engine;
  GRIDPDLP_CHECK(cfg.kkt_interval >= 1, "ReferenceSolve: kkt_interval >= 1");

  const int64_t m = p.num_constraints();
  const int64_t n = p.num_variables();
  const SparseMatrix& a = p.matrix;
  const SparseMatrix at = Transpose(a);

  std::vector<int64_t> original_cols(n);
  for (int64_t j = 0; j < n; ++j) original_cols[j] = layout.col_perm.order[j];
  const double norm_a = EstimateSpectralNorm(a, cfg.power_iterations, original_cols);
  const Normalizers norms = ComputeNormalizers(p);

  StepSizes step;
  step.eta = norm_a > 0.0 ? cfg.step_size_factor / norm_a : 1.0;
  step.omega = (norms.c_norm > 0.0 && norms.b_norm > 0.0)
                   ? norms.c_norm / norms.b_norm
                   : 1.0;

  std::vector<double> x(n), y(m, 0.0);
  for (int64_t j = 0; j < n; ++j) x[j] = Clamp(0.0, p.var_lower[j], p.var_upper[j]);
  std::vector<double> x0 = x, y0 = y;
  std::vector<double> xh(n), yh(m), xbar(n), dx(n), dy(m);

  PidState pid;
  int64_t k = 0;
  int64_t epoch = 0;
  double r_initial = -1.0;
  double r_previous = 0.0;
  SolveStatus status = SolveStatus::kIterationLimit;
  std::vector<double> best_x = x, best_y = y;
  KktReport best;
  bool have_report = false;
  bool last_was_check = false;
  std::vector<std::vector<double>> x_trace, y_trace;

  int64_t t = 0;
  for (; t < cfg.max_iterations; ++t) {
    const double tau = step.tau();
    const double sigma = step.sigma();
    const std::vector<double> aty = SpMV(at, y);
    for (int64_t j = 0; j < n; ++j) {
      xh[j] = Clamp(x[j] - tau * (p.objective[j] - aty[j]), p.var_lower[j],
                    p.var_upper[j]);
    }
    for (int64_t j = 0; j < n; ++j) xbar[j] = 2.0 * xh[j] - x[j];
    const std::vector<double> z = SpMV(a, xbar);
    for (int64_t i = 0; i < m; ++i) {
      yh[i] = y[i] - sigma * z[i] -
              sigma * Clamp(y[i] / sigma - z[i], -p.con_upper[i], -p.con_lower[i]);
    }

    const int64_t total = t + 1;
    last_was_check = total % cfg.kkt_interval == 0;
    RestartReason restart = RestartReason::kNone;
    double fp = 0.0;
    double d_x = 0.0, d_y = 0.0;
    if (last_was_check) {
      const KktReport rep = Kkt(p, at, norms, xh, yh, step);
      for (int64_t j = 0; j < n; ++j) dx[j] = x[j] - xh[j];
      for (int64_t i = 0; i < m; ++i) dy[i] = y[i] - yh[i];
      fp = PNorm(a, step, dx, dy);
      for (int64_t j = 0; j < n; ++j) dx[j] = xh[j] - x0[j];
      for (int64_t i = 0; i < m; ++i) dy[i] = yh[i] - y0[i];
      d_x = std::sqrt(SquaredNorm(dx));
      d_y = std::sqrt(SquaredNorm(dy));
      best_x = xh;
      best_y = yh;
      best = rep;
      have_report = true;

      if (cfg.enable_restarts) {
        if (r_initial < 0.0) {
          r_initial = fp;
          r_previous = fp;
        }
        restart = RestartDecision(cfg.restart, fp, r_previous, r_initial, k + 1,
                                  total);
        r_previous = fp;
      }
      if (cfg.on_kkt) {
        KktLogEntry e;
        e.iteration = total;
        e.report = rep;
        e.omega = step.omega;
        e.eta = step.eta;
        e.epoch = epoch;
        e.fixed_point_error = fp;
        e.anchor_distance = PNorm(a, step, dx, dy);
        e.restart = restart;
        cfg.on_kkt(e);
      }
      const bool bad = !std::isfinite(rep.r_primal) ||
                       !std::isfinite(rep.r_dual) || std::isnan(rep.r_gap) ||
                       !std::isfinite(rep.obj_primal) || !std::isfinite(fp);
      if (bad) {
        status = SolveStatus::kNumericalFailure;
        ++t;
        break;
      }
      if (std::max({rep.r_primal, rep.r_dual, rep.r_gap}) <= cfg.tolerance) {
        status = SolveStatus::kOptimal;
        ++t;
        break;
      }
      if (std::isfinite(cfg.time_limit_seconds) &&
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                  .count() > cfg.time_limit_seconds) {
        status = SolveStatus::kTimeLimit;
        ++t;
        break;
      }
    }

    if (restart != RestartReason::kNone) {
      if (cfg.enable_pid) {
        step.omega = PidWeightUpdate(cfg.pid, pid, d_x, d_y, step.omega);
      }
      x = xh;
      y = yh;
      x0 = x;
      y0 = y;
      k = 0;
      ++epoch;
      r_initial = fp;
    } else if (cfg.use_halpern) {
      const double kp1 = static_cast<double>(k + 1);
      const double kp2 = static_cast<double>(k + 2);
      const double wi = (1.0 + cfg.gamma) * kp1 / kp2;
      const double wa = 1.0 / kp2;
      for (int64_t j = 0; j < n; ++j) {
        x[j] = (wi * xh[j] - cfg.gamma * x[j]) + wa * x0[j];
      }
      for (int64_t i = 0; i < m; ++i) {
        y[i] = (wi * yh[i] - cfg.gamma * y[i]) + wa * y0[i];
      }
      ++k;
    } else {
      x = xh;
      y = yh;
      ++k;
    }
    if (total <= cfg.record_iterates) {
      x_trace.push_back(x);
      y_trace.push_back(y);
    }
  }

  if (status == SolveStatus::kIterationLimit && (!have_report || !last_was_check)) {
    best = Kkt(p, at, norms, x, y, step);
    best_x = x;
    best_y = y;
  }

  SolveResult out;
  out.status = status;
  out.kkt = best;
  out.iterations = t;
  out.restarts = epoch;
  out.spectral_norm = norm_a;
  out.final_step = step;
  const std::vector<double>* xs = &best_x;
  const std::vector<double>* ys = &best_y;
  GlobalVectors g = UnpermuteSolution(layout, std::span(xs, 1), std::span(ys, 1));
  out.x = std::move(g.x);
  out.y = std::move(g.y);
  out.objective = ReportedObjective(original, ObjectiveValue(original, out.x));
  for (size_t s = 0; s < x_trace.size(); ++s) {
    GlobalVectors gt = UnpermuteSolution(layout, std::span(&x_trace[s], 1),
                                         std::span(&y_trace[s], 1));
    out.x_trace.push_back(std::move(gt.x));
    out.y_trace.push_back(std::move(gt.y));
  }
  out.layout = SummarizeLayout(original, layout);
  out.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return out;
}

}  // namespace gridpdlp

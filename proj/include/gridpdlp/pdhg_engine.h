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

// Per-device iteration body of restarted Halpern PDHG on a 2D device grid.
//
// Each device (i, j) holds x[j] (replicated down grid column j) and y[i]
// (replicated across grid row i). One iteration costs two vector reductions:
//   primal:  [A^T y][j] = AllReduce_R(A[i,j]^T y[i])
//            x^[j] = proj_X[j](x[j] - tau (c[j] - [A^T y][j]))
//   dual:    z[i] = AllReduce_C(A[i,j] (2 x^[j] - x[j]))
//            y^[i] = y[i] - sigma z[i] - sigma proj_{-S[i]}(y[i]/sigma - z[i])
// followed by the communication-free Halpern combination
//   z <- ((1 + gamma)(k+1)/(k+2) PDHG(z) - gamma z) + z0/(k+2).
// Every `kkt_interval` iterations an evaluation pass runs the KKT check, the
// fixed-point error used by the restart rules, and the anchor distances used
// by the PID primal-weight update. Decisions are computed redundantly from
// reduced scalars, so every device takes the same branch without broadcasts.

#ifndef GRIDPDLP_PDHG_ENGINE_H_
#define GRIDPDLP_PDHG_ENGINE_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gridpdlp/comm.h"
#include "gridpdlp/lp_model.h"
#include "gridpdlp/partition.h"

namespace gridpdlp {

struct StepSizes {
  double eta = 1.0;    // overall step size
  double omega = 1.0;  // primal weight
  double tau() const { return eta / omega; }
  double sigma() const { return eta * omega; }
};

struct RestartParams {
  double beta_sufficient = 0.2;
  double beta_necessary = 0.8;
  double beta_artificial = 0.36;
};

enum class RestartReason {
  kNone,
  kSufficientDecay,
  kNecessaryDecay,
  kArtificial,
};

const char* ToString(RestartReason reason);

// r_current = r(z^{n,k}), r_previous = r(z^{n,k-1}) (the previous check),
// r_initial = r(z^{n,0}); epoch_iterations = k, total_iterations = T (all
// iterations so far). The first matching rule in the enum order is returned.
RestartReason RestartDecision(const RestartParams& params, double r_current,
                              double r_previous, double r_initial,
                              int64_t epoch_iterations,
                              int64_t total_iterations);

struct PidParams {
  double kp = 0.6;
  double ki = 0.1;
  double kd = 0.1;
  double omega_min = 1e-6;
  double omega_max = 1e6;
};

struct PidState {
  double integral = 0.0;    // sum of e^i so far
  double last_error = 0.0;  // e^{n-1}
  bool has_last_error = false;
};

// log w+ = log w - [kp e + ki sum(e) + kd (e - e_prev)] with
// e = log((sqrt(w) d_x) / (d_y / sqrt(w))), clamped to [omega_min,
// omega_max]. The derivative term is zero on the first update. If d_x or d_y
// is zero the weight and the state are left unchanged.
double PidWeightUpdate(const PidParams& params, PidState& state, double d_x,
                       double d_y, double omega);

struct KktReport {
  double r_primal = 0.0;
  double r_dual = 0.0;
  double r_gap = 0.0;
  double obj_primal = 0.0;  // c'x + constant
  double obj_dual = 0.0;    // -p(-y; l_c, u_c) + s'x + constant
  double overall() const { return std::max({r_primal, r_dual, r_gap}); }
};

// Normalizers and constants shared by all devices, computed once at setup.
struct ProblemScalars {
  double objective_norm = 0.0;  // ||c||_2
  double bound_norm = 0.0;      // ||finite entries of [l_c, u_c]||_2
  double objective_constant = 0.0;
};

// ---- element-wise update rules ------------------------------------------

inline double PrimalUpdate(double x, double c, double aty, double lower,
                           double upper, double tau) {
  return std::clamp(x - tau * (c - aty), lower, upper);
}

// proj_{-S}(v) = clamp(v, -u, -l).
inline double DualUpdate(double y, double z, double lower, double upper,
                         double sigma) {
  return y - sigma * z - sigma * std::clamp(y / sigma - z, -upper, -lower);
}

struct HalpernWeights {
  double image;    // (1 + gamma)(k + 1)/(k + 2)
  double current;  // gamma
  double anchor;   // 1/(k + 2)
};

HalpernWeights HalpernCoefficients(double gamma, int64_t k);

inline double HalpernUpdate(const HalpernWeights& w, double image,
                            double current, double anchor) {
  return (w.image * image - w.current * current) + w.anchor * anchor;
}

// u^T q^+ - l^T q^- for one component, with infinite bounds contributing 0
// when their multiplier part is 0 (and +inf otherwise).
double BoundPenalty(double q, double lower, double upper);

// ---- device state and collective building blocks -------------------------

struct DeviceState {
  std::vector<double> x;         // x[j], current iterate
  std::vector<double> y;         // y[i]
  std::vector<double> x_anchor;  // epoch anchor z^{n,0}
  std::vector<double> y_anchor;
  std::vector<double> x_image;   // PDHG(z)
  std::vector<double> y_image;
  std::vector<double> aty;       // reduced [A^T y][j] from the last primal step
  StepSizes step;
  double gamma = 0.0;
  int64_t inner_k = 0;  // iterations since the last restart
  int64_t epoch = 0;    // restarts so far
  PidState pid;

  // Scratch space.
  std::vector<double> col_work;
  std::vector<double> row_work;

  // Sizes the vectors for `block` and sets the anchor to (x, y).
  void Initialize(const LocalBlock& block, std::vector<double> x0,
                  std::vector<double> y0);
};

// x_image = proj(x - tau (c - AllReduce_R(A^T y))). One vector reduction (R).
void PrimalStep(const LocalBlock& block, DeviceState& state,
                Communicator& comm);

// y_image from z = AllReduce_C(A (2 x_image - x)). One vector reduction (C).
void DualStep(const LocalBlock& block, DeviceState& state, Communicator& comm);

// z <- Halpern combination of (x_image, y_image), z and the anchor using
// inner_k, then ++inner_k. Purely local.
void HalpernStep(DeviceState& state);

// ||dz||_P with dz = (dx, dy) and a_dx_local = A[i,j] dx[j] (not reduced):
//   sqrt(omega/eta ||dx||^2 + 1/(eta omega) ||dy||^2 + 2 <A dx, dy>),
// negative values from rounding clamped to 0. Three global scalar reductions.
double FixedPointError(const StepSizes& step, std::span<const double> dx,
                       std::span<const double> dy,
                       std::span<const double> a_dx_local, Communicator& comm);

// Two vector reductions (A^T y over R, A x over C) and five scalar reductions.
KktReport EvaluateKkt(const LocalBlock& block, std::span<const double> x,
                      std::span<const double> y, const StepSizes& step,
                      const ProblemScalars& scalars, Communicator& comm);

struct AnchorDistances {
  double d_x = 0.0;         // ||x - x0||_2
  double d_y = 0.0;         // ||y - y0||_2
  double p_distance = 0.0;  // ||z - z0||_P
};

// Distances of (x, y) to (x0, y0). One vector reduction (A (x - x0) over C)
// and three scalar reductions.
AnchorDistances ComputeAnchorDistances(const LocalBlock& block,
                                       std::span<const double> x,
                                       std::span<const double> y,
                                       std::span<const double> x0,
                                       std::span<const double> y0,
                                       const StepSizes& step,
                                       Communicator& comm);

// ||c|| (one scalar reduction over C) and ||finite [l_c, u_c]|| (one over R).
ProblemScalars ComputeProblemScalars(const LocalBlock& block,
                                     double objective_constant,
                                     Communicator& comm);

// ---- the device loop ------------------------------------------------------

enum class SolveStatus {
  kOptimal,
  kIterationLimit,
  kTimeLimit,
  kNumericalFailure,
};

const char* ToString(SolveStatus status);

struct KktLogEntry {
  int64_t iteration = 0;
  KktReport report;
  double omega = 0.0;
  double eta = 0.0;
  int64_t epoch = 0;
  double fixed_point_error = 0.0;
  double anchor_distance = 0.0;
  RestartReason restart = RestartReason::kNone;
};

// iteration r_primal r_dual r_gap obj_primal obj_dual omega eta epoch,
// whitespace separated, fixed order.
std::string FormatKktLogLine(const KktLogEntry& entry);

struct EngineConfig {
  double tolerance = 1e-4;
  int64_t max_iterations = 1000000;
  double time_limit_seconds = kInfinity;
  int64_t kkt_interval = 64;
  double gamma = 0.0;
  // false: z <- PDHG(z) every iteration (no anchoring).
  bool use_halpern = true;
  bool enable_restarts = true;
  RestartParams restart;
  bool enable_pid = true;
  PidParams pid;
  int power_iterations = 30;
  double step_size_factor = 0.998;  // eta = factor / ||A||_2
  // Record the iterate after each of the first `record_iterates` iterations.
  int64_t record_iterates = 0;
  // Called on device (0, 0) after every evaluation pass.
  std::function<void(const KktLogEntry&)> on_kkt;
};

// Initial eta / omega from the step-size rules: eta = factor/||A|| (1 if
// ||A|| = 0) and omega = ||c|| / ||bounds|| when both are positive, else 1.
StepSizes InitialStepSizes(double spectral_norm, const ProblemScalars& scalars,
                           double step_size_factor);

struct DeviceResult {
  SolveStatus status = SolveStatus::kIterationLimit;
  std::vector<double> x;  // x[j] of the returned point
  std::vector<double> y;  // y[i]
  KktReport report;
  int64_t iterations = 0;
  int64_t restarts = 0;
  StepSizes final_step;
  double spectral_norm = 0.0;
  CommCounters setup_counters;  // counters after setup, before iteration 0
  std::vector<std::vector<double>> x_trace;
  std::vector<std::vector<double>> y_trace;
};

// Runs setup (spectral norm, normalizers, step sizes) and the main loop from
// (x0, y0). Collective: every device of the grid must call it.
DeviceResult RunDevice(const LocalBlock& block, const EngineConfig& config,
                       double objective_constant, std::vector<double> x0,
                       std::vector<double> y0, Communicator& comm);

}  // namespace gridpdlp

#endif  // GRIDPDLP_PDHG_ENGINE_H_

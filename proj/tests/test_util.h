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

// Shared helpers for tests: seeded random data and dense oracles that do not
// go through the sparse kernels or the communicator.

#ifndef GRIDPDLP_TESTS_TEST_UTIL_H_
#define GRIDPDLP_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gridpdlp/generators.h"
#include "gridpdlp/lp_model.h"
#include "gridpdlp/pdhg_engine.h"

namespace gridpdlp::testing {

using Dense = std::vector<std::vector<double>>;

inline double RelDiff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline std::vector<double> RandomVector(std::mt19937_64& rng, size_t n,
                                        double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& e : v) e = d(rng);
  return v;
}

// Random sparse matrix with roughly `density` fill and values in [-1, 1].
inline SparseMatrix RandomMatrix(std::mt19937_64& rng, int64_t m, int64_t n,
                                 double density) {
  std::bernoulli_distribution keep(density);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<Triplet> t;
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t j = 0; j < n; ++j) {
      if (keep(rng)) t.push_back({i, j, val(rng)});
    }
  }
  return FromTriplets(m, n, std::move(t));
}

// A feasible, bounded random LP with mixed row types.
inline LpProblem RandomLp(uint64_t seed, int64_t m, int64_t n,
                          int64_t nnz_target = 0) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kUniformRandom;
  spec.m = m;
  spec.n = n;
  spec.nnz_target = nnz_target;
  spec.seed = seed;
  return Generate(spec).problem;
}

inline std::vector<double> DenseMul(const Dense& a, const std::vector<double>& x) {
  std::vector<double> out(a.size(), 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < x.size(); ++j) out[i] += a[i][j] * x[j];
  }
  return out;
}

inline std::vector<double> DenseMulT(const Dense& a, const std::vector<double>& y,
                                     size_t n) {
  std::vector<double> out(n, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < n; ++j) out[j] += a[i][j] * y[i];
  }
  return out;
}

// ||(dx, dy)||_P straight from the definition.
inline double DensePNorm(const Dense& a, double eta, double omega,
                         const std::vector<double>& dx,
                         const std::vector<double>& dy) {
  const std::vector<double> adx = DenseMul(a, dx);
  double nx = 0.0, ny = 0.0, inter = 0.0;
  for (double v : dx) nx += v * v;
  for (double v : dy) ny += v * v;
  for (size_t i = 0; i < dy.size(); ++i) inter += adx[i] * dy[i];
  return std::sqrt(std::max(0.0, omega / eta * nx + ny / (eta * omega) + 2 * inter));
}

// KKT residuals from the textbook definitions on a dense copy of A.
inline KktReport DenseKkt(const LpProblem& p, const std::vector<double>& x,
                          const std::vector<double>& y, double tau) {
  const Dense a = ToDense(p.matrix);
  const size_t m = y.size();
  const size_t n = x.size();
  const std::vector<double> ax = DenseMul(a, x);
  const std::vector<double> aty = DenseMulT(a, y, n);
  double rp = 0.0, bn = 0.0, cn = 0.0, rd = 0.0, cx = 0.0, sx = 0.0, pen = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double proj = std::min(std::max(ax[i], p.con_lower[i]), p.con_upper[i]);
    rp += (ax[i] - proj) * (ax[i] - proj);
    if (std::isfinite(p.con_lower[i])) bn += p.con_lower[i] * p.con_lower[i];
    if (std::isfinite(p.con_upper[i])) bn += p.con_upper[i] * p.con_upper[i];
    const double q = -y[i];
    if (q > 0) pen += p.con_upper[i] * q;
    if (q < 0) pen += p.con_lower[i] * q;
  }
  for (size_t j = 0; j < n; ++j) {
    cn += p.objective[j] * p.objective[j];
    const double t = x[j] - tau * (p.objective[j] - aty[j]);
    const double proj = std::min(std::max(t, p.var_lower[j]), p.var_upper[j]);
    rd += ((proj - x[j]) / tau) * ((proj - x[j]) / tau);
    sx += (proj - t) / tau * x[j];
    cx += p.objective[j] * x[j];
  }
  KktReport r;
  r.r_primal = std::sqrt(rp) / (1 + std::sqrt(bn));
  r.r_dual = std::sqrt(rd) / (1 + std::sqrt(cn));
  const double od = -pen + sx;
  r.r_gap = std::isfinite(od)
                ? std::abs(cx - od) / (1 + std::max(std::abs(cx), std::abs(od)))
                : kInfinity;
  r.obj_primal = cx + p.objective_constant;
  r.obj_dual = od + p.objective_constant;
  return r;
}

// min x  s.t. x >= 1, 0 <= x <= 10. Optimum x = 1, y = 1, objective 1.
inline LpProblem OneVariableLp() {
  LpProblem p;
  p.matrix = FromTriplets(1, 1, {{0, 0, 1.0}});
  p.objective = {1.0};
  p.var_lower = {0.0};
  p.var_upper = {10.0};
  p.con_lower = {1.0};
  p.con_upper = {kInfinity};
  return p;
}

// min -x - y  s.t. x + y <= 1, x, y in [0, 1]. Optimum -1.
inline LpProblem TwoVariableLp() {
  LpProblem p;
  p.matrix = FromTriplets(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}});
  p.objective = {-1.0, -1.0};
  p.var_lower = {0.0, 0.0};
  p.var_upper = {1.0, 1.0};
  p.con_lower = {-kInfinity};
  p.con_upper = {1.0};
  return p;
}

}  // namespace gridpdlp::testing

#endif  // GRIDPDLP_TESTS_TEST_UTIL_H_

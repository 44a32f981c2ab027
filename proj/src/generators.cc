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

#include "gridpdlp/generators.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "gridpdlp/sparse_kernels.h"

namespace gridpdlp {

const char* ToString(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kBlockDiagonal: return "block_diagonal";
    case GeneratorKind::kStaircase: return "staircase";
    case GeneratorKind::kUniformRandom: return "uniform_random";
    case GeneratorKind::kBoxKnownOptimum: return "box_lp_known_optimum";
  }
  return "?";
}

std::optional<GeneratorKind> ParseGeneratorKind(std::string_view s) {
  if (s == "block_diagonal") return GeneratorKind::kBlockDiagonal;
  if (s == "staircase") return GeneratorKind::kStaircase;
  if (s == "uniform_random") return GeneratorKind::kUniformRandom;
  if (s == "box_lp_known_optimum" || s == "box_known_optimum") {
    return GeneratorKind::kBoxKnownOptimum;
  }
  return std::nullopt;
}

namespace {

using Rng = std::mt19937_64;

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Magnitude in [0.1, 1] with a random sign.
double MatrixValue(Rng& rng) {
  const double v = Uniform(rng, 0.1, 1.0);
  return (rng() & 1) ? v : -v;
}

// A rectangular region of the matrix that may hold nonzeros.
struct Region {
  int64_t row_begin, row_end;
  int64_t col_begin, col_end;
  int64_t area() const { return (row_end - row_begin) * (col_end - col_begin); }
};

// Bernoulli(density) fill of every region; each row of a region and each
// column of a region gets at least one entry.
std::vector<Triplet> FillRegions(const std::vector<Region>& regions,
                                 double density, Rng& rng) {
  std::vector<Triplet> t;
  std::bernoulli_distribution keep(std::clamp(density, 0.0, 1.0));
  for (const Region& r : regions) {
    const int64_t width = r.col_end - r.col_begin;
    const int64_t height = r.row_end - r.row_begin;
    if (width <= 0 || height <= 0) continue;
    std::vector<bool> col_hit(width, false);
    for (int64_t i = r.row_begin; i < r.row_end; ++i) {
      bool row_hit = false;
      for (int64_t j = r.col_begin; j < r.col_end; ++j) {
        if (keep(rng)) {
          t.push_back({i, j, MatrixValue(rng)});
          row_hit = true;
          col_hit[j - r.col_begin] = true;
        }
      }
      if (!row_hit) {
        const int64_t j = r.col_begin + static_cast<int64_t>(rng() % width);
        t.push_back({i, j, MatrixValue(rng)});
        col_hit[j - r.col_begin] = true;
      }
    }
    for (int64_t k = 0; k < width; ++k) {
      if (col_hit[k]) continue;
      const int64_t i = r.row_begin + static_cast<int64_t>(rng() % height);
      t.push_back({i, r.col_begin + k, MatrixValue(rng)});
    }
  }
  return t;
}

double DensityFor(int64_t nnz_target, int64_t area) {
  if (area == 0) return 0.0;
  if (nnz_target == 0) return 0.1;
  return static_cast<double>(nnz_target) / static_cast<double>(area);
}

// Random finite box per variable and a strictly interior point.
void FillBoxes(LpProblem& p, std::vector<double>& interior, Rng& rng) {
  const int64_t n = p.num_variables();
  p.var_lower.resize(n);
  p.var_upper.resize(n);
  interior.resize(n);
  for (int64_t j = 0; j < n; ++j) {
    if (rng() % 2 == 0) {
      p.var_lower[j] = 0.0;
    } else {
      p.var_lower[j] = -Uniform(rng, 0.5, 5.0);
    }
    p.var_upper[j] = Uniform(rng, 1.0, 5.0);
    const double w = Uniform(rng, 0.1, 0.9);
    interior[j] = p.var_lower[j] + w * (p.var_upper[j] - p.var_lower[j]);
  }
}

void Check(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("Generate: " + what);
}

}  // namespace

GeneratedInstance Generate(const GeneratorSpec& spec) {
  Rng rng(spec.seed);
  GeneratedInstance out;
  LpProblem& p = out.problem;
  p.name = fmt::format("{}_{}", ToString(spec.kind), spec.seed);

  std::vector<Region> regions;
  int64_t m = 0;
  int64_t n = 0;
  switch (spec.kind) {
    case GeneratorKind::kBlockDiagonal:
    case GeneratorKind::kStaircase: {
      Check(spec.num_blocks > 0 && spec.block_rows > 0 && spec.block_cols > 0,
            "blocks need positive count and size");
      Check(spec.overlap >= 0, "overlap must be non-negative");
      m = spec.num_blocks * spec.block_rows;
      n = spec.num_blocks * spec.block_cols;
      const int64_t extra =
          spec.kind == GeneratorKind::kStaircase ? spec.overlap : 0;
      for (int64_t b = 0; b < spec.num_blocks; ++b) {
        regions.push_back({b * spec.block_rows, (b + 1) * spec.block_rows,
                           b * spec.block_cols,
                           std::min(n, (b + 1) * spec.block_cols + extra)});
      }
      break;
    }
    case GeneratorKind::kUniformRandom:
      Check(spec.m > 0 && spec.n > 0, "m and n must be positive");
      m = spec.m;
      n = spec.n;
      regions.push_back({0, m, 0, n});
      break;
    case GeneratorKind::kBoxKnownOptimum:
      Check(spec.m >= 0 && spec.n > 0, "n must be positive, m non-negative");
      m = spec.m;
      n = spec.n;
      if (m > 0) regions.push_back({0, m, 0, n});
      break;
  }
  int64_t area = 0;
  for (const Region& r : regions) area += r.area();
  Check(spec.nnz_target >= 0 && spec.nnz_target <= area,
        fmt::format("nnz_target {} outside [0, {}]", spec.nnz_target, area));

  p.matrix = FromTriplets(m, n, FillRegions(regions, DensityFor(spec.nnz_target, area), rng));
  p.objective.resize(n);
  FillBoxes(p, out.feasible_point, rng);

  if (spec.kind == GeneratorKind::kBoxKnownOptimum) {
    // Nonzero costs push every variable to a bound; rows are loose enough
    // that the whole box satisfies them.
    double optimum = 0.0;
    for (int64_t j = 0; j < n; ++j) {
      const double mag = Uniform(rng, 0.5, 1.5);
      p.objective[j] = (rng() & 1) ? mag : -mag;
      optimum += p.objective[j] * (p.objective[j] > 0 ? p.var_lower[j] : p.var_upper[j]);
    }
    p.con_lower.assign(m, -kInfinity);
    p.con_upper.assign(m, kInfinity);
    for (int64_t i = 0; i < m; ++i) {
      double reach = 1.0;
      for (int64_t k = p.matrix.row_offsets[i]; k < p.matrix.row_offsets[i + 1]; ++k) {
        const int64_t j = p.matrix.col_indices[k];
        reach += std::abs(p.matrix.values[k]) *
                 std::max(std::abs(p.var_lower[j]), std::abs(p.var_upper[j]));
      }
      switch (i % 3) {
        case 0: p.con_upper[i] = reach; break;
        case 1: p.con_lower[i] = -reach; break;
        default: p.con_lower[i] = -reach; p.con_upper[i] = reach; break;
      }
    }
    out.known_objective = optimum;
    return out;
  }

  for (int64_t j = 0; j < n; ++j) p.objective[j] = Uniform(rng, -1.0, 1.0);
  const std::vector<double> ax = SpMV(p.matrix, out.feasible_point);
  p.con_lower.resize(m);
  p.con_upper.resize(m);
  for (int64_t i = 0; i < m; ++i) {
    if (spec.kind != GeneratorKind::kUniformRandom) {
      p.con_lower[i] = p.con_upper[i] = ax[i];
      continue;
    }
    // Mixed row types around the interior point.
    const uint64_t type = rng() % 5;
    const double slack = Uniform(rng, 0.1, 1.0);
    switch (type) {
      case 0:
      case 1:
        p.con_lower[i] = p.con_upper[i] = ax[i];
        break;
      case 2:
        p.con_lower[i] = -kInfinity;
        p.con_upper[i] = ax[i] + slack;
        break;
      case 3:
        p.con_lower[i] = ax[i] - slack;
        p.con_upper[i] = kInfinity;
        break;
      default:
        p.con_lower[i] = ax[i] - slack;
        p.con_upper[i] = ax[i] + Uniform(rng, 0.1, 1.0);
        break;
    }
  }
  return out;
}

}  // namespace gridpdlp

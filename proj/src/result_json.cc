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

#include "gridpdlp/result_json.h"

#include <cmath>

namespace gridpdlp {
namespace {

using nlohmann::json;

// JSON has no infinities; they are written as the strings "inf" / "-inf".
json Number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json Tally(const AxisTally& t) {
  return {{"vector_calls", t.vector_calls},
          {"scalar_calls", t.scalar_calls},
          {"elements", t.elements}};
}

}  // namespace

json ToJson(const KktReport& r) {
  return {{"r_primal", Number(r.r_primal)},   {"r_dual", Number(r.r_dual)},
          {"r_gap", Number(r.r_gap)},         {"obj_primal", Number(r.obj_primal)},
          {"obj_dual", Number(r.obj_dual)},   {"overall", Number(r.overall())}};
}

json ToJson(const CommCounters& c) {
  json j = json::object();
  for (Axis axis : {Axis::kRow, Axis::kColumn, Axis::kGlobal}) {
    j[AxisName(axis)] = Tally(c[axis]);
  }
  return j;
}

json ToJson(const LayoutSummary& layout) {
  json devices = json::array();
  for (const DeviceLoad& d : layout.devices) {
    devices.push_back({{"row", d.coord.row},
                       {"col", d.coord.col},
                       {"rows", d.rows},
                       {"cols", d.cols},
                       {"nnz", d.nnz}});
  }
  return {{"grid", {{"rows", layout.topology.rows}, {"cols", layout.topology.cols}}},
          {"total_nnz", layout.total_nnz},
          {"max_over_mean_nnz", Number(layout.max_over_mean_nnz)},
          {"devices", std::move(devices)}};
}

json ToJson(const SolveResult& r, const JsonOptions& options) {
  json counters = json::array();
  const int cols = r.layout.topology.cols;
  for (size_t d = 0; d < r.loop_counters.size(); ++d) {
    counters.push_back({{"row", static_cast<int>(d) / cols},
                        {"col", static_cast<int>(d) % cols},
                        {"setup", ToJson(r.setup_counters[d])},
                        {"loop", ToJson(r.loop_counters[d])}});
  }
  json out = {{"schema_version", kResultSchemaVersion},
              {"status", ToString(r.status)},
              {"objective", Number(r.objective)},
              {"iterations", r.iterations},
              {"restarts", r.restarts},
              {"kkt", ToJson(r.kkt)},
              {"step",
               {{"eta", Number(r.final_step.eta)},
                {"omega", Number(r.final_step.omega)},
                {"spectral_norm", Number(r.spectral_norm)}}},
              {"layout", ToJson(r.layout)},
              {"counters", std::move(counters)}};
  if (options.include_solution) {
    json x = json::array();
    json y = json::array();
    for (double v : r.x) x.push_back(Number(v));
    for (double v : r.y) y.push_back(Number(v));
    out["x"] = std::move(x);
    out["y"] = std::move(y);
  }
  if (options.include_timings) out["wall_seconds"] = r.wall_seconds;
  return out;
}

}  // namespace gridpdlp

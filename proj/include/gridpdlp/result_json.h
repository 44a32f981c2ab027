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

// JSON views of solver output. The layout is described in docs/output.md.

#ifndef GRIDPDLP_RESULT_JSON_H_
#define GRIDPDLP_RESULT_JSON_H_

#include "json.hpp"

#include "gridpdlp/comm.h"
#include "gridpdlp/partition.h"
#include "gridpdlp/pdhg_engine.h"
#include "gridpdlp/solver.h"

namespace gridpdlp {

inline constexpr int kResultSchemaVersion = 1;

struct JsonOptions {
  bool include_solution = true;
  // Wall-clock time makes the output differ between runs; off by default.
  bool include_timings = false;
};

nlohmann::json ToJson(const KktReport& report);
nlohmann::json ToJson(const CommCounters& counters);
nlohmann::json ToJson(const LayoutSummary& layout);
nlohmann::json ToJson(const SolveResult& result, const JsonOptions& options = {});

}  // namespace gridpdlp

#endif  // GRIDPDLP_RESULT_JSON_H_

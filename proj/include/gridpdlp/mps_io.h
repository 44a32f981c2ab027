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

#ifndef GRIDPDLP_MPS_IO_H_
#define GRIDPDLP_MPS_IO_H_

#include <stdexcept>
#include <string>
#include <string_view>

#include "gridpdlp/lp_model.h"

namespace gridpdlp {

class MpsParseError : public std::runtime_error {
 public:
  MpsParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class MpsFormat {
  kAuto,   // free format, retried as fixed format if that fails
  kFree,
  kFixed,  // names may contain spaces; fields located by column
};

// Parses MPS text. Integrality markers are ignored (the LP relaxation is
// returned). Rows are E/L/G/N; the first N row is the objective and further N
// rows become free constraint rows. Duplicate COLUMNS entries are summed.
LpProblem ParseMps(std::string_view text, MpsFormat format = MpsFormat::kAuto);

// Reads a file, transparently decompressing gzip input (detected by magic
// bytes). Throws std::runtime_error if the file cannot be read.
LpProblem ReadMpsFile(const std::string& path,
                      MpsFormat format = MpsFormat::kAuto);

// Free-format MPS. Unnamed rows/columns are written as R<i>/C<j>.
std::string WriteMps(const LpProblem& problem);

}  // namespace gridpdlp

#endif  // GRIDPDLP_MPS_IO_H_

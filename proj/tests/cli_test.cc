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

// Runs the command-line binary as a subprocess.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

#include "gridpdlp/mps_io.h"
#include "gridpdlp/reference_solver.h"

namespace gridpdlp {
namespace {

const std::string kCli = GRIDPDLP_CLI_PATH;
const std::string kToy = std::string(GRIDPDLP_TEST_DATA_DIR) + "/toy.mps";

struct Outcome {
  int exit_code = -1;
  std::string out;
};

Outcome RunCli(const std::string& args) {
  const std::string cmd = "GRIDPDLP_LOG=0 " + kCli + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return o;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) o.out.append(buf.data(), got);
  const int status = pclose(pipe);
  o.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

TEST(Cli, SolveToyMatchesReference) {
  const Outcome o = RunCli("solve " + kToy + " --procs 1 --tol 1e-8 --json -");
  ASSERT_EQ(o.exit_code, 0) << o.out;
  const nlohmann::json j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["status"], "optimal");
  EXPECT_EQ(j["schema_version"], 1);
  SolverConfig c;
  c.engine.tolerance = 1e-8;
  const SolveResult ref = ReferenceSolve(ReadMpsFile(kToy), c);
  EXPECT_NEAR(j["objective"].get<double>(), ref.objective, 1e-6);
  EXPECT_NEAR(j["objective"].get<double>(), 2.5, 1e-6);
  EXPECT_EQ(j["x"].size(), 3u);
  EXPECT_FALSE(j.contains("wall_seconds"));
}

TEST(Cli, MissingFileIsAnError) {
  EXPECT_EQ(RunCli("solve /nonexistent/none.mps").exit_code, 1);
}

TEST(Cli, UnknownFlagIsAnError) {
  EXPECT_EQ(RunCli("solve " + kToy + " --frobnicate").exit_code, 1);
}

TEST(Cli, GridLargerThanProcsIsAnError) {
  EXPECT_EQ(RunCli("solve " + kToy + " --grid 2x2 --procs 2").exit_code, 1);
}

TEST(Cli, IterationLimitExitCode) {
  EXPECT_EQ(RunCli("solve " + kToy + " --max-iters 10 --tol 1e-12").exit_code, 2);
}

TEST(Cli, SeededRunsAreByteIdentical) {
  const std::string args = "solve " + kToy + " --grid 2x2 --seed 7 --block-size 1 --json -";
  const Outcome a = RunCli(args);
  const Outcome b = RunCli(args);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, LayoutReportsDevices) {
  const Outcome o = RunCli("layout " + kToy + " --grid 2x1 --perm none --json -");
  ASSERT_EQ(o.exit_code, 0);
  const nlohmann::json j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["grid"]["rows"], 2);
  EXPECT_EQ(j["grid"]["cols"], 1);
  EXPECT_EQ(j["total_nnz"], 5);
  EXPECT_EQ(j["devices"].size(), 2u);
}

}  // namespace
}  // namespace gridpdlp

// Copyright 2026 The mecafuse Authors
//
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

#ifndef MECAFUSE_HARNESS_COMMANDS_H_
#define MECAFUSE_HARNESS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "mecafuse/harness/experiment.h"

namespace mecafuse::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeFailure = 1;
inline constexpr int kExitInvalidInput = 2;

struct SimulateOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::filesystem::path out_dir;
};

struct FuseOptions {
  std::filesystem::path input;
  std::filesystem::path config;
  std::filesystem::path out_dir;
};

// Each command reports results on `out`, diagnostics on `err`, and returns
// a process exit code.
int CmdSimulate(const SimulateOptions& options, std::ostream& out,
                std::ostream& err);
int CmdFuse(const FuseOptions& options, std::ostream& out, std::ostream& err);
int CmdMetrics(const std::filesystem::path& input, std::ostream& out,
               std::ostream& err);

// Fixed-width max/rmse/final table, one line per estimator.
std::string FormatSummaryTable(std::span<const EstimatorErrors> report);

// Monte Carlo table: mean of each statistic across runs.
std::string FormatMonteCarloTable(std::span<const RunResult> runs);

}  // namespace mecafuse::harness

#endif  // MECAFUSE_HARNESS_COMMANDS_H_

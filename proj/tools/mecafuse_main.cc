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

// Command-line entry point:
//
//   mecafuse simulate --config <path> [--seed N] [--runs K] --out <dir>
//   mecafuse fuse --input <log> --config <path> --out <dir>
//   mecafuse metrics --input <log>
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid input.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mecafuse/harness/commands.h"

int main(int argc, char** argv) {
  namespace h = mecafuse::harness;

  CLI::App app{"Mecanum odometry / ultrasound IPS fusion experiments"};
  app.require_subcommand(1);

  h::SimulateOptions simulate;
  std::uint64_t seed = 0;
  int runs = 0;
  auto* sim = app.add_subcommand("simulate", "Run the square-loop experiment");
  sim->add_option("--config", simulate.config, "Experiment config file")
      ->required();
  auto* seed_opt = sim->add_option("--seed", seed, "Override the base seed");
  auto* runs_opt =
      sim->add_option("--runs", runs, "Override the Monte Carlo run count");
  sim->add_option("--out", simulate.out_dir, "Output directory")->required();

  h::FuseOptions fuse;
  auto* fuse_cmd =
      app.add_subcommand("fuse", "Re-run the EKF on a recorded trajectory log");
  fuse_cmd->add_option("--input", fuse.input, "trajectory.csv to replay")
      ->required();
  fuse_cmd->add_option("--config", fuse.config, "Config with [filter] section")
      ->required();
  fuse_cmd->add_option("--out", fuse.out_dir, "Output directory")->required();

  std::string metrics_input;
  auto* metrics = app.add_subcommand("metrics", "Summarize a trajectory log");
  metrics->add_option("--input", metrics_input, "trajectory.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return h::kExitInvalidInput;
  }

  if (sim->parsed()) {
    if (*seed_opt) simulate.seed = seed;
    if (*runs_opt) simulate.runs = runs;
    return h::CmdSimulate(simulate, std::cout, std::cerr);
  }
  if (fuse_cmd->parsed()) return h::CmdFuse(fuse, std::cout, std::cerr);
  return h::CmdMetrics(metrics_input, std::cout, std::cerr);
}

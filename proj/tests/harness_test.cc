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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "mecafuse/errors.h"
#include "mecafuse/harness/commands.h"
#include "mecafuse/harness/config.h"
#include "mecafuse/harness/experiment.h"
#include "mecafuse/world.h"

namespace mecafuse::harness {
namespace {

namespace fs = std::filesystem;

const fs::path kDefaultConfig = fs::path(MECAFUSE_CONFIG_DIR) / "default.ini";

fs::path ScratchDir(const std::string& name) {
  const fs::path dir = fs::path(testing::TempDir()) / ("mecafuse_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void Spit(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

TrajectoryLog ReadLog(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return ReadTrajectoryLog(in);
}

double MaxError(std::span<const TrajectoryRecord> records, Estimator which) {
  for (const EstimatorErrors& e : EvaluateRecords(records)) {
    if (e.estimator == which) return e.summary.max;
  }
  ADD_FAILURE() << "estimator missing";
  return 0.0;
}

TEST(RunEstimatorsTest, TwistOnlyStreamKeepsEkfOnOdometry) {
  ExperimentConfig config;
  config.world.ips.enabled = false;
  const RunResult run = RunExperiment(config, 4);
  for (const TrajectoryRecord& r : run.records) {
    ASSERT_EQ(r.event, EventKind::kTwist);
    ASSERT_EQ(r.ekf->x, r.odom->x);
    ASSERT_EQ(r.ekf->y, r.odom->y);
    ASSERT_EQ(r.ekf->theta, r.odom->theta);
  }
}

TEST(RunEstimatorsTest, LargeIpsNoiseMakesEkfFollowOdometry) {
  ExperimentConfig config;
  config.filter.measurement.sigma_ips *= 100.0;
  const RunResult run = RunExperiment(config, 6);
  double gap = 0.0;
  for (const TrajectoryRecord& r : run.records) {
    gap = std::max(gap, std::hypot(r.ekf->x - r.odom->x, r.ekf->y - r.odom->y));
  }
  EXPECT_LT(gap, 0.05);
  EXPECT_NEAR(MaxError(run.records, Estimator::kEkf),
              MaxError(run.records, Estimator::kOdometry), 0.05);
}

TEST(RunEstimatorsTest, GateLimitsDamageFromOutliers) {
  ExperimentConfig config;
  ExperimentTrace trace = RunWorld(config.world, 9);
  int corrupted = 0;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    if (auto* fix = std::get_if<PositionFix>(&trace.events[i])) {
      if (++corrupted % 25 == 0) fix->x += 10.0;
    }
  }
  config.filter.gate_enabled = false;
  const double ungated = MaxError(
      RunEstimators(trace.events, trace.truth, config.filter,
                    config.initial_variance),
      Estimator::kEkf);
  config.filter.gate_enabled = true;
  const std::vector<TrajectoryRecord> gated_records = RunEstimators(
      trace.events, trace.truth, config.filter, config.initial_variance);
  const double gated = MaxError(gated_records, Estimator::kEkf);
  EXPECT_LT(gated, ungated);
  const auto n_gated = std::count_if(
      gated_records.begin(), gated_records.end(),
      [](const TrajectoryRecord& r) { return r.outcome == FixOutcome::kGated; });
  EXPECT_GE(n_gated, corrupted / 25);
}

TEST(RunMonteCarloTest, RunsMatchSingleExperiments) {
  ExperimentConfig config;
  config.world.plan.laps = 1;
  config.runs = 3;
  config.seed = 40;
  const std::vector<RunResult> runs = RunMonteCarlo(config);
  ASSERT_EQ(runs.size(), 3u);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    EXPECT_EQ(runs[i].seed, 40 + i);
    const RunResult single = RunExperiment(config, 40 + i);
    ASSERT_EQ(single.records.size(), runs[i].records.size());
    EXPECT_EQ(single.records.back().ekf->x, runs[i].records.back().ekf->x);
  }
}

TEST(EvaluateRecordsTest, ExactEstimatesGiveZeroTable) {
  std::vector<TrajectoryRecord> records;
  for (int k = 0; k < 10; ++k) {
    TrajectoryRecord r;
    r.t = 0.1 * k;
    r.truth = {0.1 * k, 0.0, 0.0};
    r.odom = r.truth;
    r.ekf = r.truth;
    if (k % 3 == 0) {
      r.event = EventKind::kFix;
      r.ips = TimedPosition{r.t, r.truth.x, r.truth.y};
    }
    records.push_back(r);
  }
  const std::vector<EstimatorErrors> report = EvaluateRecords(records);
  ASSERT_EQ(report.size(), 3u);
  for (const EstimatorErrors& e : report) {
    EXPECT_EQ(e.summary.max, 0.0);
    EXPECT_EQ(e.summary.rmse, 0.0);
  }
  EXPECT_EQ(report[1].summary.samples, 4u);
  const std::string table = FormatSummaryTable(report);
  EXPECT_NE(table.find("ekf"), std::string::npos);
  EXPECT_NE(table.find("0.000000"), std::string::npos);
}

TEST(CommandsTest, SimulateWritesOutputsAndMetricsAgrees) {
  const fs::path dir = ScratchDir("simulate");
  std::ostringstream out;
  std::ostringstream err;
  ASSERT_EQ(CmdSimulate({kDefaultConfig, 3, std::nullopt, dir}, out, err),
            kExitOk)
      << err.str();
  for (const char* name : {"config.ini", "trajectory.csv", "summary.txt",
                           "errors_odometry.csv", "errors_ips.csv",
                           "errors_ekf.csv"}) {
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
  EXPECT_EQ(LoadConfig(dir / "config.ini").seed, 3u);
  std::ostringstream metrics;
  ASSERT_EQ(CmdMetrics(dir / "trajectory.csv", metrics, err), kExitOk);
  EXPECT_EQ(metrics.str(), Slurp(dir / "summary.txt"));
  EXPECT_EQ(out.str(), metrics.str());
}

TEST(CommandsTest, FuseReproducesEkfColumns) {
  const fs::path dir = ScratchDir("fuse");
  std::ostringstream out;
  std::ostringstream err;
  ASSERT_EQ(CmdSimulate({kDefaultConfig, 11, std::nullopt, dir / "sim"}, out,
                        err),
            kExitOk);
  ASSERT_EQ(CmdFuse({dir / "sim" / "trajectory.csv", kDefaultConfig,
                     dir / "fused"},
                    out, err),
            kExitOk)
      << err.str();
  const TrajectoryLog a = ReadLog(dir / "sim" / "trajectory.csv");
  const TrajectoryLog b = ReadLog(dir / "fused" / "trajectory.csv");
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    ASSERT_EQ(a.records[i].ekf->x, b.records[i].ekf->x) << "row " << i;
    ASSERT_EQ(a.records[i].ekf->y, b.records[i].ekf->y) << "row " << i;
    ASSERT_EQ(a.records[i].ekf->theta, b.records[i].ekf->theta) << "row " << i;
    ASSERT_EQ(a.records[i].ekf_variance, b.records[i].ekf_variance);
  }
}

TEST(CommandsTest, MonteCarloLayout) {
  const fs::path dir = ScratchDir("montecarlo");
  const fs::path config = dir / "short.ini";
  Spit(config, "[plan]\nlaps = 1\n");
  std::ostringstream out;
  std::ostringstream err;
  ASSERT_EQ(CmdSimulate({config, std::nullopt, 3, dir / "out"}, out, err),
            kExitOk);
  for (const char* run : {"run_0000", "run_0001", "run_0002"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / run / "trajectory.csv")) << run;
  }
  const std::string csv = Slurp(dir / "out" / "montecarlo.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 3);
  EXPECT_NE(out.str().find("mean_max_m"), std::string::npos);
}

TEST(CommandsTest, ExitCodes) {
  const fs::path dir = ScratchDir("exit_codes");
  std::ostringstream out;
  std::ostringstream err;

  Spit(dir / "bad.ini", "[geometry]\nwheel_radius_mm = -3\n");
  EXPECT_EQ(CmdSimulate({dir / "bad.ini", std::nullopt, std::nullopt,
                         dir / "x"},
                        out, err),
            kExitInvalidInput);
  EXPECT_NE(err.str().find("geometry.wheel_radius_mm"), std::string::npos);
  EXPECT_EQ(CmdSimulate({dir / "missing.ini", std::nullopt, std::nullopt,
                         dir / "x"},
                        out, err),
            kExitInvalidInput);
  EXPECT_EQ(CmdSimulate({kDefaultConfig, std::nullopt, 0, dir / "x"}, out,
                        err),
            kExitInvalidInput);

  Spit(dir / "bad.csv", "t,gt_x,gt_y,gt_theta\n0,0,0,0\n1,zz,0,0\n");
  err.str("");
  EXPECT_EQ(CmdMetrics(dir / "bad.csv", out, err), kExitInvalidInput);
  EXPECT_NE(err.str().find("row 3"), std::string::npos) << err.str();
  EXPECT_EQ(CmdFuse({dir / "bad.csv", kDefaultConfig, dir / "y"}, out, err),
            kExitInvalidInput);
  EXPECT_EQ(CmdMetrics(dir / "absent.csv", out, err), kExitInvalidInput);

  // An output directory that is really a file is a runtime failure.
  Spit(dir / "occupied", "");
  EXPECT_EQ(CmdSimulate({kDefaultConfig, std::nullopt, std::nullopt,
                         dir / "occupied"},
                        out, err),
            kExitRuntimeFailure);
}

}  // namespace
}  // namespace mecafuse::harness

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

#ifndef MECAFUSE_HARNESS_EXPERIMENT_H_
#define MECAFUSE_HARNESS_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mecafuse/ekf.h"
#include "mecafuse/harness/config.h"
#include "mecafuse/harness/trajectory_log.h"
#include "mecafuse/metrics.h"
#include "mecafuse/odometry.h"

namespace mecafuse::harness {

// Runs dead reckoning, raw IPS and the EKF over the same event stream and
// returns one record per event. The filter starts at the first truth pose
// with a diagonal covariance of `initial_variance`.
std::vector<TrajectoryRecord> RunEstimators(
    std::span<const SensorEvent> events, std::span<const TimedPose> truth,
    const FilterOptions& filter, const Eigen::Vector3d& initial_variance);

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<TrajectoryRecord> records;
  std::size_t dropped_fixes = 0;
  std::size_t fix_solver_failures = 0;
};

// Simulates one run of the experiment with `seed` and runs the estimators.
RunResult RunExperiment(const ExperimentConfig& config, std::uint64_t seed);

// Runs `config.runs` experiments with seeds config.seed + i, in parallel
// where hardware allows. Results are ordered by run index.
std::vector<RunResult> RunMonteCarlo(const ExperimentConfig& config);

// Sensor events and ground truth recovered from a recorded log.
struct ReplayInput {
  std::vector<SensorEvent> events;
  std::vector<TimedPose> truth;
};

// Throws ParseError when a row lacks the data its event needs.
ReplayInput ReplayInputFromLog(const TrajectoryLog& log);

struct EstimatorErrors {
  Estimator estimator = Estimator::kOdometry;
  ErrorSeries series;
  ErrorSummary summary;
};

// Error series and summary for each estimator that has at least one sample
// in `records`, in the order odometry, ips, ekf. Truth is the records' own
// ground-truth columns.
std::vector<EstimatorErrors> EvaluateRecords(
    std::span<const TrajectoryRecord> records);

}  // namespace mecafuse::harness

#endif  // MECAFUSE_HARNESS_EXPERIMENT_H_

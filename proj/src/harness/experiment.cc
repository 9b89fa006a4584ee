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

#include "mecafuse/harness/experiment.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "mecafuse/errors.h"
#include "mecafuse/world.h"

namespace mecafuse::harness {

std::vector<TrajectoryRecord> RunEstimators(
    std::span<const SensorEvent> events, std::span<const TimedPose> truth,
    const FilterOptions& filter, const Eigen::Vector3d& initial_variance) {
  std::vector<TrajectoryRecord> records;
  if (events.empty()) return records;
  if (truth.empty()) throw InvalidInput("ground truth is empty");

  const Pose2D start = truth.front().pose;
  const std::vector<FilterOutput> fused =
      RunFilter(MakeFilterState(start, initial_variance), events, filter);

  Pose2D odom = start;
  BodyTwist held;
  double odom_time = EventTime(events.front());

  records.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    TrajectoryRecord r;
    r.t = EventTime(events[i]);
    r.truth = InterpolatePose(truth, r.t);

    if (const auto* twist = std::get_if<TwistSample>(&events[i])) {
      r.event = EventKind::kTwist;
      if (r.t > odom_time) {
        odom = IntegratePose(odom, held, r.t - odom_time);
        odom_time = r.t;
      }
      held = twist->twist;
      r.odom_twist = twist->twist;
      r.odom = odom;
    } else {
      const auto& fix = std::get<PositionFix>(events[i]);
      r.event = EventKind::kFix;
      r.ips = TimedPosition{fix.t, fix.x, fix.y};
      // Dead reckoning is only committed at twist boundaries; between them
      // the pose is extrapolated without changing the integration grid.
      r.odom = r.t > odom_time ? IntegratePose(odom, held, r.t - odom_time)
                               : odom;
    }

    const FilterOutput& out = fused[i];
    r.ekf = out.state.pose;
    r.ekf_variance = out.state.covariance.diagonal();
    if (out.outcome == FixOutcome::kApplied ||
        out.outcome == FixOutcome::kGated) {
      r.nis = out.nis;
    }
    r.outcome = out.outcome;
    records.push_back(r);
  }
  return records;
}

RunResult RunExperiment(const ExperimentConfig& config, std::uint64_t seed) {
  const ExperimentTrace trace = RunWorld(config.world, seed);
  RunResult result;
  result.seed = seed;
  result.records = RunEstimators(trace.events, trace.truth, config.filter,
                                 config.initial_variance);
  result.dropped_fixes = trace.dropped_fixes;
  result.fix_solver_failures = trace.fix_solver_failures;
  return result;
}

std::vector<RunResult> RunMonteCarlo(const ExperimentConfig& config) {
  config.Validate();
  const auto runs = static_cast<std::size_t>(config.runs);
  std::vector<RunResult> results(runs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < runs; i = next++) {
      try {
        results[i] = RunExperiment(config, config.seed + i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const std::size_t threads = std::min<std::size_t>(
      runs, std::max(1u, std::thread::hardware_concurrency()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

ReplayInput ReplayInputFromLog(const TrajectoryLog& log) {
  if (!log.has_twist) {
    throw ParseError(1, "log has no odometry twist columns to replay");
  }
  ReplayInput input;
  input.events.reserve(log.records.size());
  input.truth.reserve(log.records.size());
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const TrajectoryRecord& r = log.records[i];
    input.truth.push_back({r.t, r.truth});
    if (r.event == EventKind::kTwist) {
      if (!r.odom_twist) {
        throw ParseError(i + 2, "twist row without odometry twist");
      }
      input.events.emplace_back(TwistSample{r.t, *r.odom_twist});
    } else {
      if (!r.ips) throw ParseError(i + 2, "fix row without ips position");
      input.events.emplace_back(PositionFix{r.t, r.ips->x, r.ips->y});
    }
  }
  return input;
}

std::vector<EstimatorErrors> EvaluateRecords(
    std::span<const TrajectoryRecord> records) {
  std::vector<TimedPose> truth;
  std::vector<TimedPosition> odom;
  std::vector<TimedPosition> ips;
  std::vector<TimedPosition> ekf;
  truth.reserve(records.size());
  for (const TrajectoryRecord& r : records) {
    truth.push_back({r.t, r.truth});
    if (r.odom) odom.push_back({r.t, r.odom->x, r.odom->y});
    if (r.ips) ips.push_back({r.t, r.ips->x, r.ips->y});
    if (r.ekf) ekf.push_back({r.t, r.ekf->x, r.ekf->y});
  }

  std::vector<EstimatorErrors> report;
  const auto add = [&](Estimator estimator,
                       const std::vector<TimedPosition>& estimates) {
    if (estimates.empty()) return;
    EstimatorErrors e;
    e.estimator = estimator;
    e.series = DistanceErrorSeries(estimator, estimates, truth);
    e.summary = Summarize(e.series);
    report.push_back(std::move(e));
  };
  add(Estimator::kOdometry, odom);
  add(Estimator::kIps, ips);
  add(Estimator::kEkf, ekf);
  return report;
}

}  // namespace mecafuse::harness

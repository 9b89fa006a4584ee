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

#ifndef MECAFUSE_HARNESS_TRAJECTORY_LOG_H_
#define MECAFUSE_HARNESS_TRAJECTORY_LOG_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mecafuse/ekf.h"
#include "mecafuse/kinematics.h"
#include "mecafuse/metrics.h"
#include "mecafuse/odometry.h"

namespace mecafuse::harness {

enum class EventKind { kTwist, kFix };

// One row of the trajectory log: the event that produced it, ground truth,
// and every estimator's view at that instant.
struct TrajectoryRecord {
  double t = 0.0;
  EventKind event = EventKind::kTwist;
  Pose2D truth;
  // Reported odometry twist; present on twist rows.
  std::optional<BodyTwist> odom_twist;
  // Dead-reckoned pose.
  std::optional<Pose2D> odom;
  // Raw IPS fix; present on fix rows.
  std::optional<TimedPosition> ips;
  std::optional<Pose2D> ekf;
  // Diagonal of the EKF covariance (P11, P22, P33).
  std::optional<Eigen::Vector3d> ekf_variance;
  std::optional<double> nis;
  FixOutcome outcome = FixOutcome::kNone;
};

// Parsed log plus which optional column groups the header declared.
struct TrajectoryLog {
  std::vector<TrajectoryRecord> records;
  bool has_twist = false;
  bool has_odometry = false;
  bool has_ips = false;
  bool has_ekf = false;
};

// Comma-separated, one header line naming every column. Absent values are
// empty fields. Numbers use the shortest representation that parses back to
// the same double, so a log can be replayed bit-exactly.
void WriteTrajectoryLog(std::ostream& out,
                        std::span<const TrajectoryRecord> records);

// Requires t, gt_x, gt_y and gt_theta; every other column group is
// optional but must be complete if present. Throws ParseError carrying the
// 1-based line number (the header is line 1).
TrajectoryLog ReadTrajectoryLog(std::istream& in);

// "t,distance_error_m" rows.
void WriteErrorSeries(std::ostream& out, const ErrorSeries& series);

}  // namespace mecafuse::harness

#endif  // MECAFUSE_HARNESS_TRAJECTORY_LOG_H_

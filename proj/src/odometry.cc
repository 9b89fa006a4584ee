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

#include "mecafuse/odometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mecafuse/errors.h"

namespace mecafuse {

double NormalizeAngle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * std::numbers::pi);
  if (wrapped <= -std::numbers::pi) wrapped += 2.0 * std::numbers::pi;
  return wrapped;
}

Pose2D IntegratePose(const Pose2D& pose, const BodyTwist& twist, double dt) {
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw InvalidInput("integration step must be positive, got " +
                       std::to_string(dt));
  }
  if (!std::isfinite(pose.x) || !std::isfinite(pose.y) ||
      !std::isfinite(pose.theta) || !std::isfinite(twist.vx) ||
      !std::isfinite(twist.vy) || !std::isfinite(twist.omega)) {
    throw InvalidInput("pose and twist must be finite");
  }
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return Pose2D{
      .x = pose.x + dt * (twist.vx * c - twist.vy * s),
      .y = pose.y + dt * (twist.vx * s + twist.vy * c),
      .theta = NormalizeAngle(pose.theta + dt * twist.omega),
  };
}

std::vector<Pose2D> Accumulate(const Pose2D& start,
                               std::span<const TwistStep> steps) {
  std::vector<Pose2D> poses;
  poses.reserve(steps.size());
  Pose2D pose = start;
  for (const TwistStep& step : steps) {
    pose = IntegratePose(pose, step.twist, step.dt);
    poses.push_back(pose);
  }
  return poses;
}

Pose2D InterpolatePose(std::span<const TimedPose> trajectory, double t) {
  if (trajectory.empty() || t < trajectory.front().t ||
      t > trajectory.back().t) {
    throw OutOfRange("time " + std::to_string(t) +
                     " lies outside the reference trajectory");
  }
  auto upper = std::upper_bound(
      trajectory.begin(), trajectory.end(), t,
      [](double value, const TimedPose& sample) { return value < sample.t; });
  if (upper == trajectory.end()) return trajectory.back().pose;
  const TimedPose& before = *std::prev(upper);
  const TimedPose& after = *upper;
  if (before.t == t) return before.pose;
  const double alpha = (t - before.t) / (after.t - before.t);
  return Pose2D{
      .x = before.pose.x + alpha * (after.pose.x - before.pose.x),
      .y = before.pose.y + alpha * (after.pose.y - before.pose.y),
      .theta = before.pose.theta,
  };
}

}  // namespace mecafuse

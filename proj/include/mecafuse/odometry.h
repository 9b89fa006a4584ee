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

#ifndef MECAFUSE_ODOMETRY_H_
#define MECAFUSE_ODOMETRY_H_

#include <span>
#include <vector>

#include "mecafuse/kinematics.h"

namespace mecafuse {

// Planar pose in the world frame. theta is kept in (-pi, pi].
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

struct TimedPose {
  double t = 0.0;
  Pose2D pose;
};

// One dead-reckoning step: hold `twist` for `dt` seconds.
struct TwistStep {
  BodyTwist twist;
  double dt = 0.0;
};

// Wraps an angle into (-pi, pi].
double NormalizeAngle(double angle);

// Single forward-Euler dead-reckoning step in the world frame:
//
//   x' = x + dt * (vx cos(theta) - vy sin(theta))
//   y' = y + dt * (vx sin(theta) + vy cos(theta))
//   theta' = wrap(theta + dt * omega)
//
// Throws InvalidInput when dt <= 0 or any input is non-finite.
Pose2D IntegratePose(const Pose2D& pose, const BodyTwist& twist, double dt);

// Folds IntegratePose over `steps`. Element k is the pose after step k, so
// the output has the same length as the input.
std::vector<Pose2D> Accumulate(const Pose2D& start,
                               std::span<const TwistStep> steps);

// Linear interpolation of (x, y) between the samples bracketing `t`. Heading
// is taken from the earlier sample. `trajectory` must be sorted by time;
// throws OutOfRange when `t` lies outside it.
Pose2D InterpolatePose(std::span<const TimedPose> trajectory, double t);

}  // namespace mecafuse

#endif  // MECAFUSE_ODOMETRY_H_

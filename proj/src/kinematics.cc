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

#include "mecafuse/kinematics.h"

#include <cmath>
#include <numbers>
#include <string>

#include "mecafuse/errors.h"

namespace mecafuse {
namespace {

void RequireFinite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw InvalidInput(std::string(what) + " must be finite");
  }
}

}  // namespace

void MecanumGeometry::Validate() const {
  const auto require_positive = [](double value, const char* what) {
    if (!std::isfinite(value) || value <= 0.0) {
      throw InvalidInput(std::string(what) + " must be positive and finite");
    }
  };
  require_positive(wheel_radius, "wheel radius");
  require_positive(half_wheelbase, "half wheelbase");
  require_positive(half_track, "half track");
}

BodyTwist ForwardKinematics(const WheelSpeeds& wheels,
                            const MecanumGeometry& geometry) {
  geometry.Validate();
  for (double w : wheels.rad_per_s) RequireFinite(w, "wheel speed");

  const double w1 = wheels[kFrontLeft];
  const double w2 = wheels[kFrontRight];
  const double w3 = wheels[kRearLeft];
  const double w4 = wheels[kRearRight];
  const double k = geometry.wheel_radius / 4.0;
  return BodyTwist{
      .vx = k * (w1 + w2 + w3 + w4),
      .vy = k * (-w1 + w2 + w3 - w4),
      .omega = k * (-w1 + w2 - w3 + w4) / geometry.LeverArm(),
  };
}

WheelSpeeds InverseKinematics(const BodyTwist& twist,
                              const MecanumGeometry& geometry) {
  geometry.Validate();
  RequireFinite(twist.vx, "vx");
  RequireFinite(twist.vy, "vy");
  RequireFinite(twist.omega, "omega");

  const double inv_r = 1.0 / geometry.wheel_radius;
  const double spin = geometry.LeverArm() * twist.omega;
  WheelSpeeds wheels;
  wheels[kFrontLeft] = inv_r * (twist.vx - twist.vy - spin);
  wheels[kFrontRight] = inv_r * (twist.vx + twist.vy + spin);
  wheels[kRearLeft] = inv_r * (twist.vx + twist.vy - spin);
  wheels[kRearRight] = inv_r * (twist.vx - twist.vy + spin);
  return wheels;
}

WheelSpeeds TicksToWheelSpeeds(const EncoderTicks& ticks) {
  if (!std::isfinite(ticks.dt) || ticks.dt <= 0.0) {
    throw InvalidInput("encoder interval must be positive");
  }
  if (!std::isfinite(ticks.ppr) || ticks.ppr <= 0.0) {
    throw InvalidInput("encoder ppr must be positive");
  }
  const double scale = 2.0 * std::numbers::pi / (ticks.ppr * ticks.dt);
  WheelSpeeds wheels;
  for (int i = 0; i < kNumWheels; ++i) {
    wheels[i] = scale * static_cast<double>(ticks.counts[i]);
  }
  return wheels;
}

}  // namespace mecafuse

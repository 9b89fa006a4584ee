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

#ifndef MECAFUSE_KINEMATICS_H_
#define MECAFUSE_KINEMATICS_H_

#include <array>
#include <cstdint>

namespace mecafuse {

// Wheel order used throughout the library. With this numbering a uniform
// positive wheel speed drives the base forward (+x), and the yaw row of the
// kinematic matrix has the sign pattern (-1, +1, -1, +1).
enum WheelIndex : int {
  kFrontLeft = 0,
  kFrontRight = 1,
  kRearLeft = 2,
  kRearRight = 3,
};

inline constexpr int kNumWheels = 4;

// Four-mecanum-wheel base geometry, in meters.
struct MecanumGeometry {
  double wheel_radius = 0.046875;
  // Half distance between front and rear axles.
  double half_wheelbase = 0.135;
  // Half distance between left and right wheels.
  double half_track = 0.125;

  // Throws InvalidInput unless every dimension is finite and positive.
  void Validate() const;

  // l_fr + l_rl, the lever arm that maps wheel speed to yaw rate.
  double LeverArm() const { return half_wheelbase + half_track; }
};

// Wheel angular velocities in rad/s, indexed by WheelIndex.
struct WheelSpeeds {
  std::array<double, kNumWheels> rad_per_s{};

  double& operator[](int i) { return rad_per_s[i]; }
  double operator[](int i) const { return rad_per_s[i]; }
};

// Body-frame velocity. Positive vx is forward, positive vy is to the left,
// positive omega is anticlockwise.
struct BodyTwist {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;
};

// Signed encoder counts accumulated by each wheel over one interval.
struct EncoderTicks {
  std::array<std::int64_t, kNumWheels> counts{};
  double dt = 0.0;
  double ppr = 1700.0;
};

// Maps wheel rates to body twist:
//
//   vx    = r/4 * ( w1 + w2 + w3 + w4)
//   vy    = r/4 * (-w1 + w2 + w3 - w4)
//   omega = r/4 * (-w1 + w2 - w3 + w4) / (l_fr + l_rl)
BodyTwist ForwardKinematics(const WheelSpeeds& wheels,
                            const MecanumGeometry& geometry);

// Right inverse of ForwardKinematics: ForwardKinematics(InverseKinematics(t))
// reproduces t. The converse does not hold, the 3x4 map has a null space.
WheelSpeeds InverseKinematics(const BodyTwist& twist,
                              const MecanumGeometry& geometry);

// w_i = 2*pi*counts_i / (ppr * dt).
WheelSpeeds TicksToWheelSpeeds(const EncoderTicks& ticks);

}  // namespace mecafuse

#endif  // MECAFUSE_KINEMATICS_H_

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
#include <limits>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "mecafuse/errors.h"
#include "oracles.h"

namespace mecafuse {
namespace {

const MecanumGeometry kDefault;

WheelSpeeds Wheels(double a, double b, double c, double d) {
  WheelSpeeds w;
  w.rad_per_s = {a, b, c, d};
  return w;
}

TEST(MecanumGeometryTest, DefaultsAreReferencePlatform) {
  EXPECT_DOUBLE_EQ(kDefault.wheel_radius, 0.046875);
  EXPECT_DOUBLE_EQ(kDefault.half_wheelbase, 0.135);
  EXPECT_DOUBLE_EQ(kDefault.half_track, 0.125);
  EXPECT_NO_THROW(kDefault.Validate());
}

TEST(MecanumGeometryTest, RejectsNonPositiveDimensions) {
  MecanumGeometry g;
  g.wheel_radius = 0.0;
  EXPECT_THROW(g.Validate(), InvalidInput);
  g = MecanumGeometry{};
  g.half_track = -0.1;
  EXPECT_THROW(g.Validate(), InvalidInput);
  g = MecanumGeometry{};
  g.half_wheelbase = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(g.Validate(), InvalidInput);
}

TEST(ForwardKinematicsTest, UniformSpeedDrivesForward) {
  const BodyTwist t = ForwardKinematics(Wheels(1, 1, 1, 1), kDefault);
  EXPECT_DOUBLE_EQ(t.vx, 0.046875);
  EXPECT_DOUBLE_EQ(t.vy, 0.0);
  EXPECT_DOUBLE_EQ(t.omega, 0.0);
}

TEST(ForwardKinematicsTest, ZeroInput) {
  const BodyTwist t = ForwardKinematics(Wheels(0, 0, 0, 0), kDefault);
  EXPECT_EQ(t.vx, 0.0);
  EXPECT_EQ(t.vy, 0.0);
  EXPECT_EQ(t.omega, 0.0);
}

TEST(ForwardKinematicsTest, LateralPatternSlidesLeft) {
  const BodyTwist t = ForwardKinematics(Wheels(-1, 1, 1, -1), kDefault);
  EXPECT_NEAR(t.vx, 0.0, 1e-15);
  EXPECT_NEAR(t.vy, 0.046875, 1e-15);
  EXPECT_NEAR(t.omega, 0.0, 1e-15);
}

TEST(ForwardKinematicsTest, MatchesFrozenMatrixProduct) {
  // numpy: (r/4) * M @ [1, 2, 3, 4]
  const BodyTwist t = ForwardKinematics(Wheels(1, 2, 3, 4), kDefault);
  EXPECT_NEAR(t.vx, 0.1171875, 1e-15);
  EXPECT_NEAR(t.vy, 0.0, 1e-15);
  EXPECT_NEAR(t.omega, 0.09014423076923078, 1e-15);
}

TEST(ForwardKinematicsTest, RightWheelsFasterTurnsAnticlockwise) {
  const BodyTwist t = ForwardKinematics(Wheels(1, 2, 1, 2), kDefault);
  EXPECT_GT(t.omega, 0.0);
}

TEST(ForwardKinematicsTest, RejectsNonFiniteInput) {
  EXPECT_THROW(ForwardKinematics(
                   Wheels(1, std::numeric_limits<double>::infinity(), 0, 0),
                   kDefault),
               InvalidInput);
}

TEST(ForwardKinematicsTest, MatchesMatrixOracleOnRandomInputs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const WheelSpeeds w = Wheels(dist(rng), dist(rng), dist(rng), dist(rng));
    const BodyTwist t = ForwardKinematics(w, kDefault);
    const Eigen::Vector3d expected = oracle::ForwardKinematicsMatrix(
        Eigen::Vector4d(w[0], w[1], w[2], w[3]), kDefault.wheel_radius,
        kDefault.half_wheelbase, kDefault.half_track);
    EXPECT_NEAR(t.vx, expected(0), 1e-12);
    EXPECT_NEAR(t.vy, expected(1), 1e-12);
    EXPECT_NEAR(t.omega, expected(2), 1e-12);
  }
}

TEST(ForwardKinematicsTest, IsLinear) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-20.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    const WheelSpeeds w1 = Wheels(dist(rng), dist(rng), dist(rng), dist(rng));
    const WheelSpeeds w2 = Wheels(dist(rng), dist(rng), dist(rng), dist(rng));
    const double a = dist(rng);
    const double b = dist(rng);
    WheelSpeeds mix;
    for (int k = 0; k < kNumWheels; ++k) mix[k] = a * w1[k] + b * w2[k];
    const BodyTwist lhs = ForwardKinematics(mix, kDefault);
    const BodyTwist t1 = ForwardKinematics(w1, kDefault);
    const BodyTwist t2 = ForwardKinematics(w2, kDefault);
    EXPECT_NEAR(lhs.vx, a * t1.vx + b * t2.vx, 1e-12);
    EXPECT_NEAR(lhs.vy, a * t1.vy + b * t2.vy, 1e-12);
    EXPECT_NEAR(lhs.omega, a * t1.omega + b * t2.omega, 1e-12);
  }
}

TEST(InverseKinematicsTest, ZeroTwist) {
  const WheelSpeeds w = InverseKinematics({}, kDefault);
  for (double v : w.rad_per_s) EXPECT_EQ(v, 0.0);
}

TEST(InverseKinematicsTest, UniformForwardSpeed) {
  const WheelSpeeds w = InverseKinematics({0.046875, 0.0, 0.0}, kDefault);
  for (double v : w.rad_per_s) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(InverseKinematicsTest, RoundTripThroughForward) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lin(-2.0, 2.0);
  std::uniform_real_distribution<double> ang(-4.0, 4.0);
  for (int i = 0; i < 1000; ++i) {
    const BodyTwist t{lin(rng), lin(rng), ang(rng)};
    const BodyTwist back = ForwardKinematics(InverseKinematics(t, kDefault),
                                             kDefault);
    EXPECT_NEAR(back.vx, t.vx, 1e-9);
    EXPECT_NEAR(back.vy, t.vy, 1e-9);
    EXPECT_NEAR(back.omega, t.omega, 1e-9);
  }
}

TEST(InverseKinematicsTest, RejectsNonFiniteTwist) {
  EXPECT_THROW(
      InverseKinematics({std::numeric_limits<double>::quiet_NaN(), 0, 0},
                        kDefault),
      InvalidInput);
}

TEST(TicksToWheelSpeedsTest, OneRevolutionPerSecond) {
  EncoderTicks ticks;
  ticks.counts = {1700, 1700, 1700, 1700};
  ticks.dt = 1.0;
  ticks.ppr = 1700;
  const WheelSpeeds w = TicksToWheelSpeeds(ticks);
  for (double v : w.rad_per_s) EXPECT_DOUBLE_EQ(v, 2 * std::numbers::pi);
}

TEST(TicksToWheelSpeedsTest, QuarterRevolutionInQuarterSecond) {
  EncoderTicks ticks;
  ticks.counts = {425, 425, 425, 425};
  ticks.dt = 0.25;
  ticks.ppr = 1700;
  const WheelSpeeds w = TicksToWheelSpeeds(ticks);
  for (double v : w.rad_per_s) EXPECT_NEAR(v, 2 * std::numbers::pi, 1e-12);
}

TEST(TicksToWheelSpeedsTest, ZeroCountsAndSigns) {
  EncoderTicks ticks;
  ticks.dt = 0.02;
  EXPECT_EQ(TicksToWheelSpeeds(ticks)[kRearRight], 0.0);
  ticks.counts = {-10, 10, 0, 0};
  const WheelSpeeds w = TicksToWheelSpeeds(ticks);
  EXPECT_LT(w[kFrontLeft], 0.0);
  EXPECT_DOUBLE_EQ(w[kFrontLeft], -w[kFrontRight]);
}

TEST(TicksToWheelSpeedsTest, RejectsBadIntervalOrResolution) {
  EncoderTicks ticks;
  ticks.dt = 0.0;
  EXPECT_THROW(TicksToWheelSpeeds(ticks), InvalidInput);
  ticks.dt = 0.02;
  ticks.ppr = 0.0;
  EXPECT_THROW(TicksToWheelSpeeds(ticks), InvalidInput);
}

}  // namespace
}  // namespace mecafuse

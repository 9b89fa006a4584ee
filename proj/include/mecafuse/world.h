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

#ifndef MECAFUSE_WORLD_H_
#define MECAFUSE_WORLD_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mecafuse/ekf.h"
#include "mecafuse/ips.h"
#include "mecafuse/kinematics.h"
#include "mecafuse/odometry.h"
#include "mecafuse/random.h"

namespace mecafuse {

// Square test loop: forward (+x), slide right (-y), backward (-x), slide
// left (+y), heading held at zero throughout.
struct TrajectoryPlan {
  double side_length = 3.0;   // m
  double cruise_speed = 0.5;  // m/s
  double dt = 0.02;           // s, odometry sample interval
  int laps = 2;
  // Ground truth is integrated at dt / truth_substeps.
  int truth_substeps = 10;

  void Validate() const;
  // Whole number of odometry intervals per side. The commanded speed is
  // adjusted by at most half an interval so that each side is exact.
  int StepsPerLeg() const;
  double LegSpeed() const;
  double Duration() const;
};

// Sample k: commanded twist held over [t, t + dt) and the noiseless pose at t.
struct PlanSample {
  double t = 0.0;
  BodyTwist command;
  Pose2D truth;
};

// One sample per odometry interval plus a terminal sample at rest, so the
// result has 4 * laps * StepsPerLeg() + 1 elements.
std::vector<PlanSample> GenerateSquareTrajectory(const TrajectoryPlan& plan);

enum class SlipMode {
  // Wheels spin faster than the ground moves: the encoders count the slipped
  // rates while the base follows the commanded twist.
  kOverReport,
  // The base is carried by the slipped rates while the encoders count the
  // commanded rates.
  kUnderReport,
};

struct SlipModel {
  // Multiplicative per-wheel factors in WheelIndex order; 1.0 is no slip.
  std::array<double, kNumWheels> factors{1.0, 1.0, 1.0, 1.0};
  // Standard deviation of a per-step, per-wheel additive jitter on factors.
  double jitter_std = 0.0;
  SlipMode mode = SlipMode::kOverReport;

  void Validate() const;
};

struct EncoderSample {
  EncoderTicks ticks;
  // Twist the base actually moved with over the interval.
  BodyTwist actual;
};

// Slips the wheel rates of `commanded`, then quantizes the encoder side of
// the pair to round(w * dt * ppr / 2pi) ticks per wheel.
EncoderSample SimulateEncoders(const BodyTwist& commanded,
                               const MecanumGeometry& geometry,
                               const SlipModel& slip, double ppr, double dt,
                               Rng& rng);

enum class OdometryNoiseMode {
  // Encoder ticks with slip and quantization.
  kEncoder,
  // Reported twist = actual twist + white Gaussian noise. Used when the
  // simulation must match the filter's process noise exactly.
  kTwist,
};

struct OdometrySimConfig {
  OdometryNoiseMode mode = OdometryNoiseMode::kEncoder;
  double ppr = 1700.0;
  double sigma_vx = 0.0;
  double sigma_vy = 0.0;
  double sigma_omega = 0.0;

  void Validate() const;
};

struct WorldConfig {
  MecanumGeometry geometry;
  TrajectoryPlan plan;
  SlipModel slip;
  OdometrySimConfig odometry;
  IpsConfig ips;

  void Validate() const;
};

struct ExperimentTrace {
  // Ground truth at the truth sub-step resolution.
  std::vector<TimedPose> truth;
  // Odometry twists as the robot would report them.
  std::vector<TwistSample> twists;
  std::vector<PositionFix> fixes;
  // twists and fixes merged by time; at equal times twists come first.
  std::vector<SensorEvent> events;
  std::size_t dropped_fixes = 0;
  std::size_t fix_solver_failures = 0;
};

std::vector<SensorEvent> MergeEvents(std::span<const TwistSample> twists,
                                     std::span<const PositionFix> fixes);

// Runs the square-loop protocol. The trace is a pure function of
// (config, seed).
ExperimentTrace RunWorld(const WorldConfig& config, std::uint64_t seed);

}  // namespace mecafuse

#endif  // MECAFUSE_WORLD_H_

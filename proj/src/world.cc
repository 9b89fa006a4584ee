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

#include "mecafuse/world.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mecafuse/errors.h"

namespace mecafuse {
namespace {

constexpr std::uint64_t kOdometryStream = 1;
constexpr std::uint64_t kIpsStream = 2;

BodyTwist LegTwist(int leg, double speed) {
  switch (leg) {
    case 0:
      return {.vx = speed, .vy = 0.0, .omega = 0.0};
    case 1:
      return {.vx = 0.0, .vy = -speed, .omega = 0.0};
    case 2:
      return {.vx = -speed, .vy = 0.0, .omega = 0.0};
    default:
      return {.vx = 0.0, .vy = speed, .omega = 0.0};
  }
}

std::int64_t Quantize(double rad_per_s, double dt, double ppr) {
  return std::llround(rad_per_s * dt * ppr / (2.0 * std::numbers::pi));
}

}  // namespace

void TrajectoryPlan::Validate() const {
  if (!std::isfinite(side_length) || side_length <= 0.0) {
    throw InvalidInput("side length must be positive");
  }
  if (!std::isfinite(cruise_speed) || cruise_speed <= 0.0) {
    throw InvalidInput("cruise speed must be positive");
  }
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw InvalidInput("odometry interval must be positive");
  }
  if (laps < 1) throw InvalidInput("laps must be >= 1");
  if (truth_substeps < 1) throw InvalidInput("truth substeps must be >= 1");
  if (side_length / (cruise_speed * dt) < 0.5) {
    throw InvalidInput("side is shorter than one odometry interval");
  }
}

int TrajectoryPlan::StepsPerLeg() const {
  return static_cast<int>(std::llround(side_length / (cruise_speed * dt)));
}

double TrajectoryPlan::LegSpeed() const {
  return side_length / (StepsPerLeg() * dt);
}

double TrajectoryPlan::Duration() const {
  return static_cast<double>(4 * laps * StepsPerLeg()) * dt;
}

std::vector<PlanSample> GenerateSquareTrajectory(const TrajectoryPlan& plan) {
  plan.Validate();
  const int steps_per_leg = plan.StepsPerLeg();
  const int total = 4 * plan.laps * steps_per_leg;
  const double speed = plan.LegSpeed();
  const double substep = plan.dt / plan.truth_substeps;

  std::vector<PlanSample> samples;
  samples.reserve(static_cast<std::size_t>(total) + 1);
  Pose2D pose;
  for (int k = 0; k <= total; ++k) {
    PlanSample sample;
    sample.t = k * plan.dt;
    sample.truth = pose;
    if (k < total) {
      sample.command = LegTwist((k / steps_per_leg) % 4, speed);
      for (int s = 0; s < plan.truth_substeps; ++s) {
        pose = IntegratePose(pose, sample.command, substep);
      }
    }
    samples.push_back(sample);
  }
  return samples;
}

void SlipModel::Validate() const {
  for (double f : factors) {
    if (!std::isfinite(f) || f <= 0.0) {
      throw InvalidInput("slip factors must be positive");
    }
  }
  if (!std::isfinite(jitter_std) || jitter_std < 0.0) {
    throw InvalidInput("slip jitter must be >= 0");
  }
}

EncoderSample SimulateEncoders(const BodyTwist& commanded,
                               const MecanumGeometry& geometry,
                               const SlipModel& slip, double ppr, double dt,
                               Rng& rng) {
  slip.Validate();
  if (!std::isfinite(ppr) || ppr <= 0.0) {
    throw InvalidInput("encoder ppr must be positive");
  }
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw InvalidInput("encoder interval must be positive");
  }
  const WheelSpeeds commanded_wheels = InverseKinematics(commanded, geometry);
  std::normal_distribution<double> jitter(0.0, 1.0);
  WheelSpeeds slipped;
  for (int i = 0; i < kNumWheels; ++i) {
    const double factor = slip.factors[i] + slip.jitter_std * jitter(rng);
    slipped[i] = commanded_wheels[i] * factor;
  }

  const bool encoder_sees_slip = slip.mode == SlipMode::kOverReport;
  const WheelSpeeds& counted = encoder_sees_slip ? slipped : commanded_wheels;
  const WheelSpeeds& driving = encoder_sees_slip ? commanded_wheels : slipped;

  EncoderSample sample;
  sample.ticks.dt = dt;
  sample.ticks.ppr = ppr;
  for (int i = 0; i < kNumWheels; ++i) {
    sample.ticks.counts[i] = Quantize(counted[i], dt, ppr);
  }
  sample.actual = ForwardKinematics(driving, geometry);
  return sample;
}

void OdometrySimConfig::Validate() const {
  if (!std::isfinite(ppr) || ppr <= 0.0) {
    throw InvalidInput("encoder ppr must be positive");
  }
  for (double sigma : {sigma_vx, sigma_vy, sigma_omega}) {
    if (!std::isfinite(sigma) || sigma < 0.0) {
      throw InvalidInput("twist noise must be >= 0");
    }
  }
}

void WorldConfig::Validate() const {
  geometry.Validate();
  plan.Validate();
  slip.Validate();
  odometry.Validate();
  ips.Validate();
}

std::vector<SensorEvent> MergeEvents(std::span<const TwistSample> twists,
                                     std::span<const PositionFix> fixes) {
  std::vector<SensorEvent> events;
  events.reserve(twists.size() + fixes.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < twists.size() || j < fixes.size()) {
    if (j == fixes.size() ||
        (i < twists.size() && twists[i].t <= fixes[j].t)) {
      events.emplace_back(twists[i++]);
    } else {
      events.emplace_back(fixes[j++]);
    }
  }
  return events;
}

ExperimentTrace RunWorld(const WorldConfig& config, std::uint64_t seed) {
  config.Validate();
  const std::vector<PlanSample> plan = GenerateSquareTrajectory(config.plan);
  const double dt = config.plan.dt;
  const int substeps = config.plan.truth_substeps;
  const double substep = dt / substeps;

  Rng odometry_rng = MakeRng(seed, kOdometryStream);
  Rng ips_rng = MakeRng(seed, kIpsStream);
  std::normal_distribution<double> normal(0.0, 1.0);

  ExperimentTrace trace;
  trace.twists.reserve(plan.size());
  trace.truth.reserve((plan.size() - 1) * substeps + 1);

  Pose2D truth;
  trace.truth.push_back({plan.front().t, truth});
  for (std::size_t k = 0; k + 1 < plan.size(); ++k) {
    const PlanSample& sample = plan[k];
    BodyTwist reported;
    BodyTwist actual;
    if (config.odometry.mode == OdometryNoiseMode::kEncoder) {
      const EncoderSample enc =
          SimulateEncoders(sample.command, config.geometry, config.slip,
                           config.odometry.ppr, dt, odometry_rng);
      actual = enc.actual;
      reported = ForwardKinematics(TicksToWheelSpeeds(enc.ticks),
                                   config.geometry);
    } else {
      actual = sample.command;
      reported = BodyTwist{
          .vx = actual.vx + config.odometry.sigma_vx * normal(odometry_rng),
          .vy = actual.vy + config.odometry.sigma_vy * normal(odometry_rng),
          .omega =
              actual.omega + config.odometry.sigma_omega * normal(odometry_rng),
      };
    }
    trace.twists.push_back({sample.t, reported});

    for (int s = 1; s <= substeps; ++s) {
      truth = IntegratePose(truth, actual, substep);
      const double t = s == substeps ? plan[k + 1].t : sample.t + s * substep;
      trace.truth.push_back({t, truth});
    }
  }
  // The base is at rest after the last leg.
  trace.twists.push_back({plan.back().t, BodyTwist{}});

  if (config.ips.enabled) {
    FixStreamResult fixes = FixStream(trace.truth, config.ips, ips_rng);
    trace.fixes = std::move(fixes.fixes);
    trace.dropped_fixes = fixes.dropped;
    trace.fix_solver_failures = fixes.solver_failures;
  }
  trace.events = MergeEvents(trace.twists, trace.fixes);
  return trace;
}

}  // namespace mecafuse

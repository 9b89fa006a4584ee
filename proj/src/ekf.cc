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

#include "mecafuse/ekf.h"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "mecafuse/errors.h"

namespace mecafuse {
namespace {

constexpr double kSymmetryTolerance = 1e-9;
// Innovation covariance with a larger condition number is treated as
// singular.
constexpr double kMaxInnovationCondition = 1e12;

void RequirePositiveStep(double dt) {
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw InvalidInput("filter step must be positive, got " +
                       std::to_string(dt));
  }
}

Eigen::Matrix3d Symmetrized(const Eigen::Matrix3d& m) {
  return 0.5 * (m + m.transpose());
}

}  // namespace

void ProcessNoise::Validate() const {
  for (double sigma : {sigma_vx, sigma_vy, sigma_omega}) {
    if (!std::isfinite(sigma) || sigma <= 0.0) {
      throw InvalidInput("process noise standard deviations must be positive");
    }
  }
}

void MeasurementNoise::Validate() const {
  if (!std::isfinite(sigma_ips) || sigma_ips <= 0.0) {
    throw InvalidInput("IPS standard deviation must be positive");
  }
}

double EventTime(const SensorEvent& event) {
  return std::visit([](const auto& e) { return e.t; }, event);
}

FilterState MakeFilterState(const Pose2D& pose,
                            const Eigen::Vector3d& variances) {
  FilterState state;
  state.pose = pose;
  state.pose.theta = NormalizeAngle(pose.theta);
  state.covariance = variances.asDiagonal();
  CheckCovariance(state.covariance);
  return state;
}

Pose2D ProcessModel(const Pose2D& pose, const BodyTwist& control, double dt) {
  return IntegratePose(pose, control, dt);
}

Eigen::Matrix3d ProcessJacobian(const Pose2D& pose, const BodyTwist& control,
                                double dt) {
  RequirePositiveStep(dt);
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  Eigen::Matrix3d f = Eigen::Matrix3d::Identity();
  f(0, 2) = -dt * (control.vx * s + control.vy * c);
  f(1, 2) = dt * (control.vx * c - control.vy * s);
  return f;
}

Eigen::Matrix3d ControlJacobian(const Pose2D& pose, double dt) {
  RequirePositiveStep(dt);
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  Eigen::Matrix3d b;
  b << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return dt * b;
}

void CheckCovariance(const Eigen::Matrix3d& covariance) {
  if (!covariance.allFinite()) {
    throw ConsistencyError("covariance has non-finite entries",
                           std::numeric_limits<double>::quiet_NaN());
  }
  const double asymmetry =
      (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry >= kSymmetryTolerance) {
    throw ConsistencyError(
        "covariance asymmetric by " + std::to_string(asymmetry),
        std::numeric_limits<double>::quiet_NaN());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(
      covariance, Eigen::EigenvaluesOnly);
  const double smallest = solver.eigenvalues().minCoeff();
  if (!(smallest > 0.0)) {
    throw ConsistencyError(
        "covariance not positive definite, eigenvalue " +
            std::to_string(smallest),
        smallest);
  }
}

FilterState Predict(const FilterState& state, const BodyTwist& control,
                    double dt, const ProcessNoise& noise) {
  noise.Validate();
  const Eigen::Matrix3d f = ProcessJacobian(state.pose, control, dt);
  const Eigen::Matrix3d b = ControlJacobian(state.pose, dt);
  const Eigen::Vector3d control_variance(noise.sigma_vx * noise.sigma_vx,
                                         noise.sigma_vy * noise.sigma_vy,
                                         noise.sigma_omega * noise.sigma_omega);

  FilterState next;
  next.pose = ProcessModel(state.pose, control, dt);
  next.covariance = Symmetrized(f * state.covariance * f.transpose() +
                                b * control_variance.asDiagonal() *
                                    b.transpose());
  CheckCovariance(next.covariance);
  return next;
}

UpdateResult UpdatePosition(const FilterState& state, const PositionFix& fix,
                            const MeasurementNoise& noise) {
  noise.Validate();
  if (!std::isfinite(fix.x) || !std::isfinite(fix.y)) {
    throw InvalidInput("position fix must be finite");
  }
  Eigen::Matrix<double, 2, 3> h = Eigen::Matrix<double, 2, 3>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  const double r = noise.sigma_ips * noise.sigma_ips;
  const Eigen::Matrix3d& p = state.covariance;

  const Eigen::Vector2d innovation(fix.x - state.pose.x, fix.y - state.pose.y);
  Eigen::Matrix2d s = h * p * h.transpose();
  s.diagonal().array() += r;
  s = 0.5 * (s + s.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(s,
                                                        Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues()(0);
  const double hi = solver.eigenvalues()(1);
  const double condition =
      lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(condition <= kMaxInnovationCondition)) {
    throw UpdateRejected("innovation covariance is singular (condition " +
                             std::to_string(condition) + ")",
                         condition);
  }

  const Eigen::Matrix2d s_inv = s.inverse();
  const Eigen::Matrix<double, 3, 2> gain = p * h.transpose() * s_inv;
  const Eigen::Vector3d correction = gain * innovation;

  UpdateResult result;
  result.innovation = innovation;
  result.nis = innovation.dot(s_inv * innovation);
  result.state.pose = Pose2D{
      .x = state.pose.x + correction(0),
      .y = state.pose.y + correction(1),
      .theta = NormalizeAngle(state.pose.theta + correction(2)),
  };
  result.state.covariance =
      Symmetrized((Eigen::Matrix3d::Identity() - gain * h) * p);
  CheckCovariance(result.state.covariance);
  return result;
}

PoseEkf::PoseEkf(const FilterState& initial, const FilterOptions& options)
    : state_(initial), options_(options) {
  options_.process.Validate();
  options_.measurement.Validate();
  CheckCovariance(state_.covariance);
}

void PoseEkf::Advance(double t) {
  if (!std::isfinite(t)) {
    throw StreamOrderError(events_processed_, "non-finite timestamp");
  }
  if (!started_) {
    started_ = true;
    time_ = t;
    return;
  }
  if (t < time_) {
    throw StreamOrderError(events_processed_,
                           "timestamp " + std::to_string(t) +
                               " precedes filter time " +
                               std::to_string(time_));
  }
  if (t > time_) {
    state_ = Predict(state_, held_twist_, t - time_, options_.process);
    time_ = t;
  }
}

FixOutcome PoseEkf::ApplyFix(const PositionFix& fix, double* nis) {
  if (nis != nullptr) *nis = std::numeric_limits<double>::quiet_NaN();
  UpdateResult result;
  try {
    result = UpdatePosition(state_, fix, options_.measurement);
  } catch (const UpdateRejected&) {
    return FixOutcome::kRejected;
  }
  if (nis != nullptr) *nis = result.nis;
  if (options_.gate_enabled && result.nis > options_.gate_threshold) {
    return FixOutcome::kGated;
  }
  state_ = result.state;
  return FixOutcome::kApplied;
}

FilterOutput PoseEkf::Process(const SensorEvent& event) {
  const double t = EventTime(event);
  Advance(t);
  FilterOutput output;
  output.t = t;
  if (const auto* twist = std::get_if<TwistSample>(&event)) {
    HoldTwist(twist->twist);
  } else {
    output.outcome = ApplyFix(std::get<PositionFix>(event), &output.nis);
  }
  output.state = state_;
  ++events_processed_;
  return output;
}

std::vector<FilterOutput> RunFilter(const FilterState& initial,
                                    std::span<const SensorEvent> events,
                                    const FilterOptions& options) {
  PoseEkf filter(initial, options);
  std::vector<FilterOutput> outputs;
  outputs.reserve(events.size());
  for (const SensorEvent& event : events) {
    outputs.push_back(filter.Process(event));
  }
  return outputs;
}

}  // namespace mecafuse

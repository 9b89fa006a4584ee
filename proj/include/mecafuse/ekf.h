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

#ifndef MECAFUSE_EKF_H_
#define MECAFUSE_EKF_H_

#include <cstddef>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "mecafuse/kinematics.h"
#include "mecafuse/odometry.h"

namespace mecafuse {

// Pose estimate and its 3x3 covariance over (x, y, theta).
struct FilterState {
  Pose2D pose;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Identity();
};

// Standard deviations of the body-frame twist noise. The filter maps these
// through the control Jacobian to obtain state-space process noise.
struct ProcessNoise {
  double sigma_vx = 0.05;
  double sigma_vy = 0.05;
  double sigma_omega = 0.05;

  void Validate() const;
};

// Standard deviation of an IPS position fix, applied to x and y alike.
struct MeasurementNoise {
  double sigma_ips = 0.3;

  void Validate() const;
};

// Absolute (x, y) observation from the positioning system.
struct PositionFix {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

// Odometry twist valid from `t` until the next event.
struct TwistSample {
  double t = 0.0;
  BodyTwist twist;
};

using SensorEvent = std::variant<TwistSample, PositionFix>;

double EventTime(const SensorEvent& event);

// Chi-square 99.9% point for 2 degrees of freedom.
inline constexpr double kDefaultGateThreshold = 13.8;

struct FilterOptions {
  ProcessNoise process;
  MeasurementNoise measurement;
  // Mahalanobis gate on fixes. Off unless enabled explicitly.
  bool gate_enabled = false;
  double gate_threshold = kDefaultGateThreshold;
};

// Builds a state with a diagonal covariance.
FilterState MakeFilterState(const Pose2D& pose,
                            const Eigen::Vector3d& variances);

// Motion model; numerically identical to IntegratePose.
Pose2D ProcessModel(const Pose2D& pose, const BodyTwist& control, double dt);

// d(ProcessModel)/d(state).
Eigen::Matrix3d ProcessJacobian(const Pose2D& pose, const BodyTwist& control,
                                double dt);

// d(ProcessModel)/d(control) = dt * Rz(theta).
Eigen::Matrix3d ControlJacobian(const Pose2D& pose, double dt);

// Prediction step. Covariance is propagated as F P F^T + B Qu B^T with Qu
// the diagonal control-space noise, then re-symmetrized. Throws
// ConsistencyError if the result is not positive definite.
FilterState Predict(const FilterState& state, const BodyTwist& control,
                    double dt, const ProcessNoise& noise);

struct UpdateResult {
  FilterState state;
  Eigen::Vector2d innovation = Eigen::Vector2d::Zero();
  // Normalized innovation squared, y^T S^-1 y.
  double nis = 0.0;
};

// Kalman update with a direct (x, y) observation, H = [I2 0]. Uses the
// simple (I - K H) P covariance form followed by re-symmetrization.
// Throws UpdateRejected when the innovation covariance is numerically
// singular, ConsistencyError if the posterior is not positive definite.
UpdateResult UpdatePosition(const FilterState& state, const PositionFix& fix,
                            const MeasurementNoise& noise);

// Throws ConsistencyError unless `covariance` is symmetric to 1e-9 and
// positive definite. The error carries the smallest eigenvalue.
void CheckCovariance(const Eigen::Matrix3d& covariance);

enum class FixOutcome {
  kNone,      // event was not a fix
  kApplied,
  kGated,     // NIS above the gate threshold, prior kept
  kRejected,  // innovation covariance singular, prior kept
};

struct FilterOutput {
  double t = 0.0;
  FilterState state;
  FixOutcome outcome = FixOutcome::kNone;
  double nis = std::numeric_limits<double>::quiet_NaN();
};

// Sequential event-driven filter. The first event fixes the time origin.
// A twist is held (zero-order hold) from its timestamp until the next event;
// every event first propagates the state to its own timestamp with the
// held twist, then a twist replaces the held value and a fix triggers an
// update. Not thread-safe; one instance per run.
class PoseEkf {
 public:
  PoseEkf(const FilterState& initial, const FilterOptions& options);

  // Propagates to `t`. Throws StreamOrderError if `t` precedes the current
  // filter time.
  void Advance(double t);
  void HoldTwist(const BodyTwist& twist) { held_twist_ = twist; }
  // Applies a fix at the current filter time. `nis` receives the statistic
  // for applied and gated fixes, NaN otherwise.
  FixOutcome ApplyFix(const PositionFix& fix, double* nis = nullptr);

  // Advance + HoldTwist/ApplyFix for one event.
  FilterOutput Process(const SensorEvent& event);

  const FilterState& state() const { return state_; }
  double time() const { return time_; }
  std::size_t events_processed() const { return events_processed_; }

 private:
  FilterState state_;
  FilterOptions options_;
  BodyTwist held_twist_;
  double time_ = 0.0;
  bool started_ = false;
  std::size_t events_processed_ = 0;
};

// Runs PoseEkf over a time-ordered stream; one output per event.
std::vector<FilterOutput> RunFilter(const FilterState& initial,
                                    std::span<const SensorEvent> events,
                                    const FilterOptions& options);

}  // namespace mecafuse

#endif  // MECAFUSE_EKF_H_

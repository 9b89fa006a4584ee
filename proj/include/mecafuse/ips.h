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

#ifndef MECAFUSE_IPS_H_
#define MECAFUSE_IPS_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mecafuse/ekf.h"
#include "mecafuse/odometry.h"
#include "mecafuse/random.h"

namespace mecafuse {

// Stationary ultrasound beacons. Construction validates the geometry: at
// least three beacons, non-negative heights, and ground projections that are
// not collinear.
class BeaconLayout {
 public:
  explicit BeaconLayout(std::vector<Eigen::Vector3d> beacons,
                        double speed_of_sound = 343.0);

  // Four beacons on the corners of a square arena with one corner at the
  // origin, all at the same height.
  static BeaconLayout Corners(double side_length, double height);

  const std::vector<Eigen::Vector3d>& beacons() const { return beacons_; }
  std::size_t size() const { return beacons_.size(); }
  double speed_of_sound() const { return speed_of_sound_; }

  // Mean ground-plane position of the beacons.
  Eigen::Vector2d Centroid() const;

  double RangeFromTimeOfFlight(double seconds) const {
    return seconds * speed_of_sound_;
  }

 private:
  std::vector<Eigen::Vector3d> beacons_;
  double speed_of_sound_;
};

// Slant ranges to each beacon, in layout order.
struct RangeSet {
  std::vector<double> ranges;
  double t = 0.0;
};

// range_i = |(x, y, mobile_z) - beacon_i| + N(0, sigma_range^2).
RangeSet SimulateRanges(const Eigen::Vector2d& position, double mobile_z,
                        const BeaconLayout& layout, double sigma_range,
                        Rng& rng, double t = 0.0);

struct TrilaterationResult {
  PositionFix fix;
  int iterations = 0;
  // Root mean square range residual at the solution, meters.
  double residual_rms = 0.0;
};

inline constexpr int kMaxTrilaterationIterations = 50;

// Least-squares (x, y) with the mobile height held fixed, solved by
// Gauss-Newton with step halving. Converged once a step is shorter than
// 1e-9 m; throws SolverFailure after kMaxTrilaterationIterations.
TrilaterationResult Trilaterate(const RangeSet& ranges,
                                const BeaconLayout& layout, double mobile_z,
                                const Eigen::Vector2d& initial_guess);

enum class IpsNoiseMode {
  // Noise the beacon ranges and trilaterate.
  kRange,
  // Add isotropic Gaussian noise straight to (x, y).
  kCoordinate,
};

struct IpsConfig {
  bool enabled = true;
  BeaconLayout layout = BeaconLayout::Corners(3.0, 2.0);
  double mobile_height = 0.2;
  IpsNoiseMode noise_mode = IpsNoiseMode::kRange;
  double sigma_range = 0.25;
  double sigma_xy = 0.3;
  double rate_hz = 8.0;
  double dropout_prob = 0.0;

  void Validate() const;
};

struct FixStreamResult {
  std::vector<PositionFix> fixes;
  std::size_t dropped = 0;
  std::size_t solver_failures = 0;
};

// Samples `truth` every 1/rate_hz seconds starting at its first timestamp,
// simulates one fix per sample and drops fixes independently with
// probability dropout_prob. Trilateration failures are counted and dropped.
FixStreamResult FixStream(std::span<const TimedPose> truth,
                          const IpsConfig& config, Rng& rng);

}  // namespace mecafuse

#endif  // MECAFUSE_IPS_H_

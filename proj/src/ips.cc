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

#include "mecafuse/ips.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Cholesky>

#include "mecafuse/errors.h"

namespace mecafuse {
namespace {

constexpr double kMinProjectedArea = 1e-6;  // m^2
constexpr double kStepTolerance = 1e-9;     // m
constexpr double kMinStepScale = 1.0 / 1024.0;

double SquaredResidual(const Eigen::Vector2d& p, double mobile_z,
                       const BeaconLayout& layout,
                       const std::vector<double>& ranges) {
  double sum = 0.0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const double r =
        (Eigen::Vector3d(p.x(), p.y(), mobile_z) - layout.beacons()[i]).norm() -
        ranges[i];
    sum += r * r;
  }
  return sum;
}

}  // namespace

BeaconLayout::BeaconLayout(std::vector<Eigen::Vector3d> beacons,
                           double speed_of_sound)
    : beacons_(std::move(beacons)), speed_of_sound_(speed_of_sound) {
  if (!std::isfinite(speed_of_sound_) || speed_of_sound_ <= 0.0) {
    throw InvalidInput("speed of sound must be positive");
  }
  if (beacons_.size() < 3) {
    throw InvalidInput("at least three beacons are required, got " +
                       std::to_string(beacons_.size()));
  }
  for (const Eigen::Vector3d& b : beacons_) {
    if (!b.allFinite()) throw InvalidInput("beacon position must be finite");
    if (b.z() < 0.0) throw InvalidInput("beacon height must be >= 0");
  }
  double largest_area = 0.0;
  for (std::size_t i = 0; i < beacons_.size(); ++i) {
    for (std::size_t j = i + 1; j < beacons_.size(); ++j) {
      for (std::size_t k = j + 1; k < beacons_.size(); ++k) {
        const Eigen::Vector2d u = (beacons_[j] - beacons_[i]).head<2>();
        const Eigen::Vector2d v = (beacons_[k] - beacons_[i]).head<2>();
        largest_area =
            std::max(largest_area, 0.5 * std::abs(u.x() * v.y() - u.y() * v.x()));
      }
    }
  }
  if (largest_area < kMinProjectedArea) {
    throw InvalidInput("beacon ground projections are collinear");
  }
}

BeaconLayout BeaconLayout::Corners(double side_length, double height) {
  return BeaconLayout({{0.0, 0.0, height},
                       {side_length, 0.0, height},
                       {side_length, side_length, height},
                       {0.0, side_length, height}});
}

Eigen::Vector2d BeaconLayout::Centroid() const {
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (const Eigen::Vector3d& b : beacons_) sum += b.head<2>();
  return sum / static_cast<double>(beacons_.size());
}

RangeSet SimulateRanges(const Eigen::Vector2d& position, double mobile_z,
                        const BeaconLayout& layout, double sigma_range,
                        Rng& rng, double t) {
  if (!std::isfinite(sigma_range) || sigma_range < 0.0) {
    throw InvalidInput("range noise must be >= 0");
  }
  if (!position.allFinite() || !std::isfinite(mobile_z)) {
    throw InvalidInput("mobile beacon position must be finite");
  }
  std::normal_distribution<double> noise(0.0, 1.0);
  const Eigen::Vector3d mobile(position.x(), position.y(), mobile_z);
  RangeSet set;
  set.t = t;
  set.ranges.reserve(layout.size());
  for (const Eigen::Vector3d& b : layout.beacons()) {
    const double range = (mobile - b).norm() + sigma_range * noise(rng);
    if (!(range > 0.0)) {
      throw InvalidInput("simulated range is not positive");
    }
    set.ranges.push_back(range);
  }
  return set;
}

TrilaterationResult Trilaterate(const RangeSet& ranges,
                                const BeaconLayout& layout, double mobile_z,
                                const Eigen::Vector2d& initial_guess) {
  if (ranges.ranges.size() != layout.size()) {
    throw InvalidInput("range count does not match beacon count");
  }
  for (double r : ranges.ranges) {
    if (!std::isfinite(r) || r <= 0.0) {
      throw InvalidInput("ranges must be positive and finite");
    }
  }
  if (!initial_guess.allFinite()) {
    throw InvalidInput("initial guess must be finite");
  }

  const std::size_t n = layout.size();
  Eigen::Vector2d p = initial_guess;
  double cost = SquaredResidual(p, mobile_z, layout, ranges.ranges);
  Eigen::MatrixX2d jacobian(n, 2);
  Eigen::VectorXd residual(n);

  for (int iteration = 1; iteration <= kMaxTrilaterationIterations;
       ++iteration) {
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector3d delta =
          Eigen::Vector3d(p.x(), p.y(), mobile_z) - layout.beacons()[i];
      const double distance = delta.norm();
      residual(i) = distance - ranges.ranges[i];
      if (distance > 0.0) {
        jacobian.row(i) = delta.head<2>().transpose() / distance;
      } else {
        jacobian.row(i).setZero();
      }
    }
    const Eigen::Matrix2d normal = jacobian.transpose() * jacobian;
    const Eigen::Vector2d gradient = jacobian.transpose() * residual;
    const Eigen::LDLT<Eigen::Matrix2d> ldlt(normal);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) {
      throw SolverFailure("trilateration normal equations are singular",
                          std::sqrt(cost / static_cast<double>(n)));
    }
    const Eigen::Vector2d step = -ldlt.solve(gradient);

    // Halve the step until the cost stops increasing.
    double scale = 1.0;
    Eigen::Vector2d candidate = p + step;
    double candidate_cost =
        SquaredResidual(candidate, mobile_z, layout, ranges.ranges);
    while (candidate_cost > cost && scale > kMinStepScale) {
      scale *= 0.5;
      candidate = p + scale * step;
      candidate_cost =
          SquaredResidual(candidate, mobile_z, layout, ranges.ranges);
    }
    const double step_norm = scale * step.norm();
    if (candidate_cost <= cost) {
      p = candidate;
      cost = candidate_cost;
    }
    if (step_norm < kStepTolerance) {
      return TrilaterationResult{
          .fix = PositionFix{.t = ranges.t, .x = p.x(), .y = p.y()},
          .iterations = iteration,
          .residual_rms = std::sqrt(cost / static_cast<double>(n)),
      };
    }
  }
  const double rms = std::sqrt(cost / static_cast<double>(n));
  throw SolverFailure("trilateration did not converge in " +
                          std::to_string(kMaxTrilaterationIterations) +
                          " iterations, residual " + std::to_string(rms),
                      rms);
}

void IpsConfig::Validate() const {
  if (!std::isfinite(mobile_height) || mobile_height < 0.0) {
    throw InvalidInput("mobile beacon height must be >= 0");
  }
  if (!std::isfinite(sigma_range) || sigma_range < 0.0) {
    throw InvalidInput("range noise must be >= 0");
  }
  if (!std::isfinite(sigma_xy) || sigma_xy < 0.0) {
    throw InvalidInput("coordinate noise must be >= 0");
  }
  if (!std::isfinite(rate_hz) || rate_hz <= 0.0) {
    throw InvalidInput("IPS rate must be positive");
  }
  if (!(dropout_prob >= 0.0 && dropout_prob < 1.0)) {
    throw InvalidInput("dropout probability must lie in [0, 1)");
  }
}

FixStreamResult FixStream(std::span<const TimedPose> truth,
                          const IpsConfig& config, Rng& rng) {
  config.Validate();
  FixStreamResult result;
  if (truth.empty()) return result;

  const double t0 = truth.front().t;
  const double duration = truth.back().t - t0;
  const auto samples =
      static_cast<std::size_t>(std::floor(duration * config.rate_hz + 1e-9)) +
      1;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Vector2d guess = config.layout.Centroid();

  result.fixes.reserve(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const double t =
        std::min(t0 + static_cast<double>(j) / config.rate_hz, truth.back().t);
    const Pose2D pose = InterpolatePose(truth, t);

    // Noise is drawn before the dropout decision so that the surviving fixes
    // do not depend on dropout_prob.
    PositionFix fix;
    bool solved = true;
    if (config.noise_mode == IpsNoiseMode::kCoordinate) {
      const double ex = normal(rng);
      const double ey = normal(rng);
      fix = PositionFix{.t = t,
                        .x = pose.x + config.sigma_xy * ex,
                        .y = pose.y + config.sigma_xy * ey};
    } else {
      const RangeSet ranges =
          SimulateRanges({pose.x, pose.y}, config.mobile_height, config.layout,
                         config.sigma_range, rng, t);
      try {
        fix = Trilaterate(ranges, config.layout, config.mobile_height, guess)
                  .fix;
      } catch (const SolverFailure&) {
        solved = false;
      }
    }
    const bool drop = uniform(rng) < config.dropout_prob;
    if (!solved) {
      ++result.solver_failures;
      ++result.dropped;
    } else if (drop) {
      ++result.dropped;
    } else {
      result.fixes.push_back(fix);
    }
  }
  return result;
}

}  // namespace mecafuse

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

#ifndef MECAFUSE_METRICS_H_
#define MECAFUSE_METRICS_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mecafuse/ekf.h"
#include "mecafuse/odometry.h"

namespace mecafuse {

enum class Estimator { kOdometry, kIps, kEkf };

std::string_view EstimatorName(Estimator estimator);

struct TimedPosition {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

// Per-sample Euclidean (x, y) error of one estimator against ground truth.
struct ErrorSeries {
  Estimator source = Estimator::kOdometry;
  std::vector<double> timestamps;
  std::vector<double> distance_error;
};

// Truth is linearly interpolated to each estimate's timestamp. Throws
// OutOfRange if an estimate lies outside the truth span.
ErrorSeries DistanceErrorSeries(Estimator source,
                                std::span<const TimedPosition> estimates,
                                std::span<const TimedPose> truth);

struct ErrorSummary {
  std::size_t samples = 0;
  double max = 0.0;
  double rmse = 0.0;
  double final = 0.0;
};

// Throws InvalidInput on an empty series.
ErrorSummary Summarize(const ErrorSeries& series);

// Absolute heading error, wrapped to [0, pi].
std::vector<double> HeadingErrorSeries(std::span<const TimedPose> estimates,
                                       std::span<const TimedPose> truth);

// e^T P^-1 e for a 2-D position error. Throws ConsistencyError when the
// covariance block is not positive definite.
double PositionNees(const Eigen::Vector2d& error,
                    const Eigen::Matrix2d& covariance);

// Position NEES for every filter output, against interpolated truth.
std::vector<double> NeesSeries(std::span<const FilterOutput> states,
                               std::span<const TimedPose> truth);

// Two-sided acceptance band for the average of `count` independent
// chi-square(dof) samples: the average times `count` is chi-square with
// dof * count degrees of freedom.
struct ChiSquareBand {
  double lower = 0.0;
  double upper = 0.0;
  bool Contains(double value) const {
    return value >= lower && value <= upper;
  }
};
ChiSquareBand MeanChiSquareBand(int dof, std::size_t count,
                                double confidence = 0.95);

}  // namespace mecafuse

#endif  // MECAFUSE_METRICS_H_

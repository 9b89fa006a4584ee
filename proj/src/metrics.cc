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

#include "mecafuse/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <boost/math/distributions/chi_squared.hpp>

#include "mecafuse/errors.h"

namespace mecafuse {

std::string_view EstimatorName(Estimator estimator) {
  switch (estimator) {
    case Estimator::kOdometry:
      return "odometry";
    case Estimator::kIps:
      return "ips";
    case Estimator::kEkf:
      return "ekf";
  }
  return "unknown";
}

ErrorSeries DistanceErrorSeries(Estimator source,
                                std::span<const TimedPosition> estimates,
                                std::span<const TimedPose> truth) {
  ErrorSeries series;
  series.source = source;
  series.timestamps.reserve(estimates.size());
  series.distance_error.reserve(estimates.size());
  for (const TimedPosition& est : estimates) {
    const Pose2D ref = InterpolatePose(truth, est.t);
    series.timestamps.push_back(est.t);
    series.distance_error.push_back(std::hypot(est.x - ref.x, est.y - ref.y));
  }
  return series;
}

ErrorSummary Summarize(const ErrorSeries& series) {
  if (series.distance_error.empty()) {
    throw InvalidInput("cannot summarize an empty error series");
  }
  ErrorSummary summary;
  summary.samples = series.distance_error.size();
  double sum_sq = 0.0;
  for (double e : series.distance_error) {
    summary.max = std::max(summary.max, e);
    sum_sq += e * e;
  }
  summary.rmse = std::sqrt(sum_sq / static_cast<double>(summary.samples));
  summary.final = series.distance_error.back();
  return summary;
}

std::vector<double> HeadingErrorSeries(std::span<const TimedPose> estimates,
                                       std::span<const TimedPose> truth) {
  std::vector<double> errors;
  errors.reserve(estimates.size());
  for (const TimedPose& est : estimates) {
    const Pose2D ref = InterpolatePose(truth, est.t);
    errors.push_back(std::abs(NormalizeAngle(est.pose.theta - ref.theta)));
  }
  return errors;
}

double PositionNees(const Eigen::Vector2d& error,
                    const Eigen::Matrix2d& covariance) {
  const Eigen::LLT<Eigen::Matrix2d> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw ConsistencyError("position covariance is not positive definite",
                           covariance.eigenvalues().real().minCoeff());
  }
  return error.dot(llt.solve(error));
}

std::vector<double> NeesSeries(std::span<const FilterOutput> states,
                               std::span<const TimedPose> truth) {
  std::vector<double> nees;
  nees.reserve(states.size());
  for (const FilterOutput& out : states) {
    const Pose2D ref = InterpolatePose(truth, out.t);
    const Eigen::Vector2d error(out.state.pose.x - ref.x,
                                out.state.pose.y - ref.y);
    nees.push_back(
        PositionNees(error, out.state.covariance.topLeftCorner<2, 2>()));
  }
  return nees;
}

ChiSquareBand MeanChiSquareBand(int dof, std::size_t count,
                                double confidence) {
  if (dof < 1 || count == 0 || !(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidInput("invalid chi-square band request");
  }
  const double n = static_cast<double>(count);
  const boost::math::chi_squared distribution(dof * n);
  const double tail = 0.5 * (1.0 - confidence);
  return ChiSquareBand{
      .lower = boost::math::quantile(distribution, tail) / n,
      .upper = boost::math::quantile(distribution, 1.0 - tail) / n,
  };
}

}  // namespace mecafuse

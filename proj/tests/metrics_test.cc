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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "mecafuse/errors.h"

namespace mecafuse {
namespace {

const std::vector<TimedPose> kLine = {{0.0, {0, 0, 0}}, {10.0, {10, 0, 0}}};

TEST(EstimatorNameTest, Names) {
  EXPECT_EQ(EstimatorName(Estimator::kOdometry), "odometry");
  EXPECT_EQ(EstimatorName(Estimator::kIps), "ips");
  EXPECT_EQ(EstimatorName(Estimator::kEkf), "ekf");
}

TEST(DistanceErrorSeriesTest, PerfectEstimateHasZeroError) {
  std::vector<TimedPosition> est;
  for (int k = 0; k <= 100; ++k) est.push_back({0.1 * k, 0.1 * k, 0.0});
  const ErrorSeries s = DistanceErrorSeries(Estimator::kEkf, est, kLine);
  ASSERT_EQ(s.distance_error.size(), 101u);
  for (double e : s.distance_error) EXPECT_NEAR(e, 0.0, 1e-12);
  const ErrorSummary sum = Summarize(s);
  EXPECT_NEAR(sum.max, 0.0, 1e-12);
  EXPECT_NEAR(sum.rmse, 0.0, 1e-12);
}

TEST(DistanceErrorSeriesTest, ConstantOffsetGivesConstantError) {
  std::vector<TimedPosition> est;
  for (int k = 0; k <= 20; ++k) est.push_back({0.5 * k, 0.5 * k + 0.3, 0.4});
  const ErrorSummary sum =
      Summarize(DistanceErrorSeries(Estimator::kIps, est, kLine));
  EXPECT_NEAR(sum.max, 0.5, 1e-12);
  EXPECT_NEAR(sum.rmse, 0.5, 1e-12);
  EXPECT_NEAR(sum.final, 0.5, 1e-12);
  EXPECT_EQ(sum.samples, 21u);
}

TEST(DistanceErrorSeriesTest, EstimateOutsideTruthSpanThrows) {
  const std::vector<TimedPosition> est = {{11.0, 0, 0}};
  EXPECT_THROW(DistanceErrorSeries(Estimator::kIps, est, kLine), OutOfRange);
}

TEST(SummarizeTest, HandComputedValues) {
  ErrorSeries s;
  s.timestamps = {0, 1};
  s.distance_error = {0.0, 1.0};
  const ErrorSummary sum = Summarize(s);
  EXPECT_EQ(sum.max, 1.0);
  EXPECT_NEAR(sum.rmse, std::sqrt(0.5), 1e-15);
  EXPECT_EQ(sum.final, 1.0);
}

TEST(SummarizeTest, RmseBetweenMeanAndMax) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.0, 3.0);
  ErrorSeries s;
  for (int i = 0; i < 500; ++i) s.distance_error.push_back(d(rng));
  double mean = 0.0;
  for (double e : s.distance_error) mean += e;
  mean /= 500.0;
  const ErrorSummary sum = Summarize(s);
  EXPECT_GE(sum.rmse, mean);
  EXPECT_LE(sum.rmse, sum.max);
}

TEST(SummarizeTest, EmptySeriesIsInvalid) {
  EXPECT_THROW(Summarize(ErrorSeries{}), InvalidInput);
}

TEST(HeadingErrorSeriesTest, WrapsDifference) {
  const std::vector<TimedPose> truth = {{0.0, {0, 0, 3.1}}, {1.0, {0, 0, 3.1}}};
  const std::vector<TimedPose> est = {{0.5, {0, 0, -3.1}}};
  const std::vector<double> e = HeadingErrorSeries(est, truth);
  EXPECT_NEAR(e[0], 2 * std::numbers::pi - 6.2, 1e-12);
}

TEST(PositionNeesTest, HandComputed) {
  const Eigen::Matrix2d p = Eigen::Vector2d(0.25, 0.25).asDiagonal();
  EXPECT_NEAR(PositionNees({0.5, 0.5}, p), 2.0, 1e-12);
  EXPECT_THROW(PositionNees({1, 0}, Eigen::Matrix2d::Zero()), ConsistencyError);
}

TEST(NeesSeriesTest, UsesOutputTimestamps) {
  FilterOutput out;
  out.t = 5.0;
  out.state.pose = {5.0, 1.0, 0.0};
  out.state.covariance = Eigen::Matrix3d::Identity();
  const std::vector<FilterOutput> outs = {out};
  EXPECT_NEAR(NeesSeries(outs, kLine)[0], 1.0, 1e-12);
}

TEST(MeanChiSquareBandTest, MatchesFrozenQuantiles) {
  // scipy.stats.chi2.ppf evaluated offline.
  const ChiSquareBand one = MeanChiSquareBand(2, 1);
  EXPECT_NEAR(one.lower, 0.05063561596857975, 1e-10);
  EXPECT_NEAR(one.upper, 7.377758908227871, 1e-10);
  const ChiSquareBand fifty = MeanChiSquareBand(2, 50);
  EXPECT_NEAR(fifty.lower, 1.4844385494984746, 1e-10);
  EXPECT_NEAR(fifty.upper, 2.5912239437167317, 1e-10);
  EXPECT_TRUE(fifty.Contains(2.0));
  EXPECT_FALSE(fifty.Contains(3.0));
}

TEST(MeanChiSquareBandTest, NarrowsWithCount) {
  double width = 1e9;
  for (std::size_t n : {1u, 10u, 100u, 1000u}) {
    const ChiSquareBand b = MeanChiSquareBand(2, n);
    EXPECT_LT(b.upper - b.lower, width);
    EXPECT_LT(b.lower, 2.0);
    EXPECT_GT(b.upper, 2.0);
    width = b.upper - b.lower;
  }
}

TEST(MeanChiSquareBandTest, RejectsBadArguments) {
  EXPECT_THROW(MeanChiSquareBand(0, 10), InvalidInput);
  EXPECT_THROW(MeanChiSquareBand(2, 0), InvalidInput);
  EXPECT_THROW(MeanChiSquareBand(2, 10, 1.0), InvalidInput);
}

}  // namespace
}  // namespace mecafuse

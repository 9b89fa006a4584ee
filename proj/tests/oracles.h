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

// Independent reference implementations used only by tests. They follow the
// matrix forms directly and share no code with the library paths they check.

#ifndef MECAFUSE_TESTS_ORACLES_H_
#define MECAFUSE_TESTS_ORACLES_H_

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

namespace mecafuse::oracle {

// (r/4) * M * w with M written out row by row.
inline Eigen::Vector3d ForwardKinematicsMatrix(const Eigen::Vector4d& w,
                                               double r, double l_fr,
                                               double l_rl) {
  const double k = 1.0 / (l_fr + l_rl);
  Eigen::Matrix<double, 3, 4> m;
  m << 1, 1, 1, 1,
      -1, 1, 1, -1,
      -k, k, -k, k;
  return (r / 4.0) * m * w;
}

inline Eigen::Matrix3d Rotation(double theta) {
  Eigen::Matrix3d rot;
  rot << std::cos(theta), -std::sin(theta), 0,
         std::sin(theta), std::cos(theta), 0,
         0, 0, 1;
  return rot;
}

// x_{k+1} = x_k + Rz(theta_k) u dt, heading left unwrapped.
inline Eigen::Vector3d DeadReckonStep(const Eigen::Vector3d& x,
                                      const Eigen::Vector3d& u, double dt) {
  return x + Rotation(x(2)) * u * dt;
}

inline double WrapAngle(double a) {
  while (a > std::numbers::pi) a -= 2 * std::numbers::pi;
  while (a <= -std::numbers::pi) a += 2 * std::numbers::pi;
  return a;
}

// Central finite-difference Jacobian of f at x. The third output component
// is treated as an angle.
inline Eigen::Matrix3d NumericJacobian(
    const std::function<Eigen::Vector3d(const Eigen::Vector3d&)>& f,
    const Eigen::Vector3d& x, double h = 1e-6) {
  Eigen::Matrix3d j;
  for (int c = 0; c < 3; ++c) {
    Eigen::Vector3d plus = x;
    Eigen::Vector3d minus = x;
    plus(c) += h;
    minus(c) -= h;
    Eigen::Vector3d diff = f(plus) - f(minus);
    diff(2) = WrapAngle(diff(2));
    j.col(c) = diff / (2 * h);
  }
  return j;
}

struct KalmanResult {
  Eigen::Vector3d x;
  Eigen::Matrix3d p;
  double nis = 0.0;
};

// Textbook predict with control-space noise mapped through G = dt * Rz.
inline KalmanResult PredictOracle(const Eigen::Vector3d& x,
                                  const Eigen::Matrix3d& p,
                                  const Eigen::Vector3d& u, double dt,
                                  const Eigen::Vector3d& sigma) {
  const double c = std::cos(x(2));
  const double s = std::sin(x(2));
  Eigen::Matrix3d f = Eigen::Matrix3d::Identity();
  f(0, 2) = -dt * (u(0) * s + u(1) * c);
  f(1, 2) = dt * (u(0) * c - u(1) * s);
  const Eigen::Matrix3d g = dt * Rotation(x(2));
  const Eigen::Matrix3d q = sigma.cwiseProduct(sigma).asDiagonal();
  return {DeadReckonStep(x, u, dt), f * p * f.transpose() + g * q * g.transpose()};
}

inline KalmanResult UpdateOracle(const Eigen::Vector3d& x,
                                 const Eigen::Matrix3d& p,
                                 const Eigen::Vector2d& z, double sigma) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 3);
  h(0, 0) = 1;
  h(1, 1) = 1;
  const Eigen::MatrixXd r = sigma * sigma * Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd y = z - h * x;
  const Eigen::MatrixXd s = h * p * h.transpose() + r;
  const Eigen::MatrixXd k = p * h.transpose() * s.inverse();
  KalmanResult out;
  out.x = x + k * y;
  out.p = (Eigen::MatrixXd::Identity(3, 3) - k * h) * p;
  out.nis = y.dot(s.inverse() * y);
  return out;
}

// Slant ranges from a ground point at height z to each beacon.
inline std::vector<double> ExactRanges(const Eigen::Vector2d& p, double z,
                                       const std::vector<Eigen::Vector3d>& b) {
  std::vector<double> ranges;
  for (const auto& beacon : b) {
    ranges.push_back(std::sqrt(std::pow(p.x() - beacon.x(), 2) +
                               std::pow(p.y() - beacon.y(), 2) +
                               std::pow(z - beacon.z(), 2)));
  }
  return ranges;
}

}  // namespace mecafuse::oracle

#endif  // MECAFUSE_TESTS_ORACLES_H_

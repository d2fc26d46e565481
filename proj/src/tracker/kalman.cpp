// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/tracker/kalman.hpp"

#include "svreid/core/errors.hpp"

namespace svreid {

namespace {

constexpr double kStdWeightPosition = 1.0 / 20.0;
constexpr double kStdWeightVelocity = 1.0 / 160.0;

using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat48 = Eigen::Matrix<double, 4, 8>;

Mat8 transition() {
  Mat8 f = Mat8::Identity();
  for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
  return f;
}

Mat48 observation() {
  Mat48 h = Mat48::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
  return h;
}

Mat8 process_noise(double height) {
  Eigen::Matrix<double, 8, 1> std;
  std << kStdWeightPosition * height, kStdWeightPosition * height, 1e-2,
      kStdWeightPosition * height, kStdWeightVelocity * height, kStdWeightVelocity * height,
      1e-5, kStdWeightVelocity * height;
  return std.array().square().matrix().asDiagonal();
}

Eigen::Matrix4d measurement_noise(double height) {
  Eigen::Vector4d std;
  std << kStdWeightPosition * height, kStdWeightPosition * height, 1e-1,
      kStdWeightPosition * height;
  return std.array().square().matrix().asDiagonal();
}

void check_state(const KalmanState& s) {
  if (!s.mean.allFinite() || !s.covariance.allFinite()) {
    throw NumericalError("kalman: non-finite state");
  }
}

}  // namespace

Eigen::Vector4d box_to_measurement(const BoundingBox& box) {
  return {static_cast<double>(box.cx), static_cast<double>(box.cy),
          static_cast<double>(box.w) / static_cast<double>(box.h), static_cast<double>(box.h)};
}

BoundingBox measurement_to_box(const Eigen::Vector4d& z) {
  BoundingBox box;
  box.cx = static_cast<float>(z(0));
  box.cy = static_cast<float>(z(1));
  box.h = static_cast<float>(z(3));
  box.w = static_cast<float>(z(2) * z(3));
  return box;
}

KalmanState kalman_initiate(const BoundingBox& box) {
  KalmanState s;
  s.mean.head<4>() = box_to_measurement(box);
  const double h = static_cast<double>(box.h);
  Vec8 std;
  std << 2.0 * kStdWeightPosition * h, 2.0 * kStdWeightPosition * h, 1e-2,
      2.0 * kStdWeightPosition * h, 10.0 * kStdWeightVelocity * h, 10.0 * kStdWeightVelocity * h,
      1e-5, 10.0 * kStdWeightVelocity * h;
  s.covariance = std.array().square().matrix().asDiagonal();
  return s;
}

KalmanState kalman_predict(const KalmanState& s) {
  check_state(s);
  const Mat8 f = transition();
  KalmanState out;
  out.mean = f * s.mean;
  out.covariance = f * s.covariance * f.transpose() + process_noise(s.mean(3));
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose().eval());
  return out;
}

KalmanState kalman_update(const KalmanState& s, const BoundingBox& det) {
  check_state(s);
  const Mat48 h = observation();
  const Eigen::Matrix4d innovation_cov =
      h * s.covariance * h.transpose() + measurement_noise(s.mean(3));
  Eigen::LLT<Eigen::Matrix4d> llt(innovation_cov);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("kalman_update: innovation covariance not positive definite");
  }
  // Gain solved as S K^T = H P^T, avoiding an explicit inverse.
  const Eigen::Matrix<double, 8, 4> pht = s.covariance * h.transpose();
  const Eigen::Matrix<double, 8, 4> gain = llt.solve(pht.transpose()).transpose();
  const Eigen::Vector4d innovation = box_to_measurement(det) - h * s.mean;

  KalmanState out;
  out.mean = s.mean + gain * innovation;
  out.covariance = s.covariance - gain * innovation_cov * gain.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose().eval());
  return out;
}

double mahalanobis_sq(const Eigen::VectorXd& innov, const Eigen::MatrixXd& S) {
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("mahalanobis_sq: covariance not positive definite");
  }
  const Eigen::VectorXd z = llt.matrixL().solve(innov);
  return z.squaredNorm();
}

double gating_distance(const KalmanState& s, const BoundingBox& det) {
  check_state(s);
  const Mat48 h = observation();
  const Eigen::Matrix4d innovation_cov =
      h * s.covariance * h.transpose() + measurement_noise(s.mean(3));
  const Eigen::Vector4d innovation = box_to_measurement(det) - h * s.mean;
  return mahalanobis_sq(innovation, innovation_cov);
}

}  // namespace svreid

// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <Eigen/Dense>

#include "svreid/core/types.hpp"

namespace svreid {

// Constant-velocity Kalman filter on the measurement (cx, cy, aspect, h),
// DeepSort-style: position/velocity noise scales with box height.
struct KalmanState {
  Eigen::Matrix<double, 8, 1> mean = Eigen::Matrix<double, 8, 1>::Zero();
  Eigen::Matrix<double, 8, 8> covariance = Eigen::Matrix<double, 8, 8>::Identity();
};

Eigen::Vector4d box_to_measurement(const BoundingBox& box);
BoundingBox measurement_to_box(const Eigen::Vector4d& z);

KalmanState kalman_initiate(const BoundingBox& box);
KalmanState kalman_predict(const KalmanState& s);
KalmanState kalman_update(const KalmanState& s, const BoundingBox& det);

// Squared Mahalanobis distance of the box's measurement under the
// predicted measurement distribution. Throws NumericalError when the
// innovation covariance is not positive definite.
double gating_distance(const KalmanState& s, const BoundingBox& det);

// Quadratic form innov^T S^-1 innov via Cholesky; shared by gating and its
// tests. Throws NumericalError when S is not SPD.
double mahalanobis_sq(const Eigen::VectorXd& innov, const Eigen::MatrixXd& S);

}  // namespace svreid

/*
 * Copyright 2026 The esfts Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ESFTS_LINALG_HPP_
#define ESFTS_LINALG_HPP_

#include <Eigen/Dense>

namespace esfts::linalg {

inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kDefinitenessTol = 1e-12;
inline constexpr double kMaxCondition = 1e12;

/// ||M - M^T||_max <= tol * max(||M||_max, tiny)
bool is_symmetric(const Eigen::MatrixXd& m, double tol = kSymmetryTol);

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m);

/// Ascending eigenvalues of the symmetric part of m.
Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& m);

/// Smallest eigenvalue > kDefinitenessTol * ||m||_2.
bool is_positive_definite(const Eigen::MatrixXd& m);

/// Largest eigenvalue of the symmetric part of m.
double max_eigenvalue(const Eigen::MatrixXd& m);
double min_eigenvalue(const Eigen::MatrixXd& m);

double spectral_norm(const Eigen::MatrixXd& m);

/// Inverse of a symmetric PD matrix through its eigendecomposition. Throws
/// esfts::Error (kDefiniteness) when m is not PD or its condition number
/// exceeds kMaxCondition.
Eigen::MatrixXd sym_inverse(const Eigen::MatrixXd& m);

/// Condition number lambda_max / lambda_min of a symmetric PD matrix.
double sym_condition(const Eigen::MatrixXd& m);

Eigen::MatrixXd expm(const Eigen::MatrixXd& m);

}  // namespace esfts::linalg

#endif  // ESFTS_LINALG_HPP_

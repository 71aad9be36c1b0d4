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

#include "esfts/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "esfts/core.hpp"

namespace esfts::linalg {

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double scale =
      std::max(m.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kSolver, "symmetric eigendecomposition failed");
  }
  return es.eigenvalues();
}

double max_eigenvalue(const Eigen::MatrixXd& m) {
  return sym_eigenvalues(m).maxCoeff();
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  return sym_eigenvalues(m).minCoeff();
}

bool is_positive_definite(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd ev = sym_eigenvalues(m);
  const double norm = ev.cwiseAbs().maxCoeff();
  return ev.minCoeff() > kDefinitenessTol * norm && norm > 0.0;
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double sym_condition(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd ev = sym_eigenvalues(m);
  if (ev.minCoeff() <= 0.0) return std::numeric_limits<double>::infinity();
  return ev.maxCoeff() / ev.minCoeff();
}

Eigen::MatrixXd sym_inverse(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m));
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kSolver, "symmetric eigendecomposition failed");
  }
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0 || ev.maxCoeff() / ev.minCoeff() > kMaxCondition) {
    throw Error(ErrorKind::kDefiniteness,
                "matrix is singular or too ill-conditioned to invert");
  }
  const Eigen::MatrixXd& v = es.eigenvectors();
  return v * ev.cwiseInverse().asDiagonal() * v.transpose();
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& m) { return m.exp(); }

}  // namespace esfts::linalg

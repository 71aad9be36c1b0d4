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

#ifndef ESFTS_AVERAGING_HPP_
#define ESFTS_AVERAGING_HPP_

#include <functional>
#include <vector>

#include "esfts/core.hpp"

namespace esfts {

using VectorField = std::function<Vector(const Vector&)>;
/// u(t, theta), periodic in the fast phase theta.
using FastInput = std::function<double(double t, double theta)>;

inline constexpr int kSimpsonPanels = 2048;

/// Double integral int_0^Tu int_0^theta u_i(t, s) u_j(t, theta) ds dtheta by
/// composite Simpson quadrature on both axes. Throws a contract error if
/// either input is not Tu-periodic or does not average to zero.
double nu_coefficient(const FastInput& u_i, const FastInput& u_j,
                      double period, double t = 0.0);

/// [b_i, b_j](x) = (db_j/dx) b_i(x) - (db_i/dx) b_j(x), Jacobians by central
/// differences with step 1e-6 * (1 + |x|).
Vector lie_bracket(const VectorField& b_i, const VectorField& b_j,
                   const Vector& x);

/// Central-difference Jacobian of f at x.
Matrix numeric_jacobian(const VectorField& f, const Vector& x);

/// Vector fields b_i driven by fast periodic inputs u_i. The nu coefficients
/// are computed once at construction, at slow time t.
class DitheredField {
 public:
  DitheredField(std::vector<VectorField> fields, std::vector<FastInput> inputs,
                double period, double t = 0.0);

  std::size_t size() const { return fields_.size(); }
  double period() const { return period_; }
  const std::vector<VectorField>& fields() const { return fields_; }
  /// nu(i, j) for i < j; zero elsewhere.
  const Matrix& nu() const { return nu_; }

 private:
  std::vector<VectorField> fields_;
  std::vector<FastInput> inputs_;
  double period_;
  Matrix nu_;
};

/// drift(x) + (1/Tu) sum_{i<j} [b_i, b_j](x) nu_ij.
Vector averaged_field(const VectorField& drift, const DitheredField& d,
                      const Vector& x);

/// Fields of the extremum-seeking law at slow time t: b_1 = alpha B(t) with
/// u_1 = cos(theta) and b_2 = -k B(t) x^T Pi(t) x with u_2 = sin(theta).
DitheredField es_dithered_field(const FtsProblem& p, double k, double alpha,
                                double t);

/// A(t) x, the drift of the extremum-seeking closed loop.
VectorField es_drift(const FtsProblem& p, double t);

/// Abar(t) = A(t) - ka B(t) B(t)^T Pi(t) at a single time.
Matrix averaged_matrix(const FtsProblem& p, double ka, double t);

/// Abar on the grid nodes as a sampled-linear schedule.
MatrixSchedule averaged_closed_loop(const FtsProblem& p, double ka,
                                    const TimeGrid& grid);

}  // namespace esfts

#endif  // ESFTS_AVERAGING_HPP_

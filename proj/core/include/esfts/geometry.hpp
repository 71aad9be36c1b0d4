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

#ifndef ESFTS_GEOMETRY_HPP_
#define ESFTS_GEOMETRY_HPP_

#include <vector>

#include "esfts/core.hpp"

namespace esfts {

/// Shrunk FTS target used by the averaged system.
struct ShrunkSpec {
  std::vector<double> times;      // grid nodes
  std::vector<double> r;          // shrink factor per node, in (0, 1]
  std::vector<double> gamma_min;  // min_i gamma_i(tau) per node
  MatrixSchedule GammaBar;        // sampled-linear Gamma(tau) / r(tau)^2
  /// Largest relative deviation between the interpolated GammaBar and
  /// Gamma(t)/r(t)^2 at segment midpoints.
  double midpoint_deviation = 0.0;
};

/// min_i gamma_i where {1/gamma_i^2} are the eigenvalues of Gamma.
double gamma_min(const Matrix& gamma);

/// Minimum distance between the ellipsoids x^T Gamma x = 1 and
/// y^T Gamma y = r^2: (1 - r) * min_i gamma_i.
double min_ellipsoid_distance(const Matrix& gamma, double r);

/// r = 1 - Delta / min_i gamma_i, the largest admissible shrink factor.
double shrink_factor(const Matrix& gamma, double delta);

/// Per-node shrink factors and GammaBar for a validated problem. Throws
/// kDeltaTooLarge when GammaBar(t0) is not strictly inside R.
ShrunkSpec shrunk_gamma(const FtsProblem& p, const TimeGrid& grid);

}  // namespace esfts

#endif  // ESFTS_GEOMETRY_HPP_

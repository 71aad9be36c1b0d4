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

#include "esfts/geometry.hpp"

#include <cmath>
#include <sstream>

#include "esfts/linalg.hpp"

namespace esfts {

double gamma_min(const Matrix& gamma) {
  if (!linalg::is_positive_definite(gamma)) {
    throw Error(ErrorKind::kDefiniteness, "Gamma is not positive definite");
  }
  if (linalg::sym_condition(gamma) > linalg::kMaxCondition) {
    throw Error(ErrorKind::kDefiniteness, "Gamma is too ill-conditioned");
  }
  return 1.0 / std::sqrt(linalg::max_eigenvalue(gamma));
}

double min_ellipsoid_distance(const Matrix& gamma, double r) {
  if (!(r > 0.0) || !(r <= 1.0)) {
    throw Error(ErrorKind::kDomain, "shrink factor r must lie in (0, 1]");
  }
  return (1.0 - r) * gamma_min(gamma);
}

double shrink_factor(const Matrix& gamma, double delta) {
  if (!(delta >= 0.0)) {
    throw Error(ErrorKind::kDomain, "Delta must be non-negative");
  }
  const double g = gamma_min(gamma);
  if (delta >= g) {
    std::ostringstream os;
    os << "Delta = " << delta << " is not below min_i gamma_i = " << g;
    throw Error(ErrorKind::kShrinkageInfeasible, os.str());
  }
  return 1.0 - delta / g;
}

ShrunkSpec shrunk_gamma(const FtsProblem& p, const TimeGrid& grid) {
  ShrunkSpec spec;
  std::vector<MatrixSchedule::Sample> samples;
  const int n_nodes = grid.intervals() + 1;
  spec.times.reserve(static_cast<std::size_t>(n_nodes));
  spec.r.reserve(static_cast<std::size_t>(n_nodes));
  spec.gamma_min.reserve(static_cast<std::size_t>(n_nodes));
  samples.reserve(static_cast<std::size_t>(n_nodes));
  for (int k = 0; k < n_nodes; ++k) {
    const double t = grid.node(k);
    const Matrix g = p.gamma(t);
    const double r = shrink_factor(g, p.Delta);
    spec.times.push_back(t);
    spec.r.push_back(r);
    spec.gamma_min.push_back(gamma_min(g));
    samples.push_back({t, g / (r * r)});
  }
  spec.GammaBar = MatrixSchedule::sampled(std::move(samples));

  const Matrix gap = p.R - spec.GammaBar.value(p.t0);
  if (!(linalg::min_eigenvalue(gap) >
        linalg::kDefinitenessTol * linalg::spectral_norm(p.R))) {
    std::ostringstream os;
    os << "Delta = " << p.Delta
       << " too large: shrunk GammaBar(t0) is not strictly smaller than R "
          "(lambda_min(R - GammaBar(t0)) = "
       << linalg::min_eigenvalue(gap) << ")";
    throw Error(ErrorKind::kDeltaTooLarge, os.str());
  }

  for (int k = 0; k < grid.intervals(); ++k) {
    const double tm = 0.5 * (grid.node(k) + grid.node(k + 1));
    const Matrix g = p.gamma(tm);
    const double r = shrink_factor(g, p.Delta);
    const Matrix exact = g / (r * r);
    const double dev = (spec.GammaBar.value(tm) - exact).norm() / exact.norm();
    spec.midpoint_deviation = std::max(spec.midpoint_deviation, dev);
  }
  if (spec.midpoint_deviation > 1e-6) {
    std::ostringstream os;
    os << "grid too coarse: interpolated GammaBar deviates by "
       << spec.midpoint_deviation << " (relative) at a segment midpoint";
    throw Error(ErrorKind::kGrid, os.str());
  }
  return spec;
}

}  // namespace esfts

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

#ifndef ESFTS_FREQUENCY_HPP_
#define ESFTS_FREQUENCY_HPP_

#include <string>
#include <vector>

#include "esfts/core.hpp"

namespace esfts {

/// max over grid nodes of lambda_max(Gamma) / sqrt(lambda_min(Gamma)).
double kappa(const MatrixSchedule& gamma, const TimeGrid& grid);

enum class EtaMethod {
  kTransition,     // RK4 transition matrix of the averaged closed loop
  kExpOfIntegral,  // expm of the trapezoidal integral of Abar
};

/// max over grid nodes of the spectral norm of the averaged closed-loop
/// propagator from t0.
double eta(const FtsProblem& p, double ka, const TimeGrid& grid,
           EtaMethod method = EtaMethod::kTransition);

/// max over grid nodes of |B(t)|.
double input_norm(const FtsProblem& p, const TimeGrid& grid);

struct FrequencyBound {
  double kappa = 0.0;
  double eta = 0.0;
  double b_norm = 0.0;
  double omega_2nd = 0.0;  // root of the second-order inequality
  double omega_1st = 0.0;  // first-order bound
};

/// Minimum dithering frequency from the approximate distance bound:
///   2 u + k kappa |B| u^2 <= rho,  u = 1/sqrt(omega),
///   rho = Delta / ((alpha + k) eta |B|),
/// and the first-order bound omega >= (2 / rho)^2.
FrequencyBound min_frequency(double k, double alpha, double b_norm,
                             double kappa, double eta, double delta);

/// Full bound report for a synthesized product ka.
struct BoundReport {
  double ka = 0.0;
  double k = 0.0;
  double alpha = 0.0;
  FrequencyBound bound;
  double eta_exp_integral = 0.0;
  /// max_t max(||dGamma/dt||, ||Gamma A||) over the grid.
  double regime_scale = 0.0;
  bool regime_ok = true;
  std::vector<std::string> warnings;
};

BoundReport compute_bound(const FtsProblem& p, double ka, double k,
                          double alpha, const TimeGrid& grid);

}  // namespace esfts

#endif  // ESFTS_FREQUENCY_HPP_

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

#include "esfts/frequency.hpp"

#include <cmath>
#include <sstream>

#include "esfts/averaging.hpp"
#include "esfts/linalg.hpp"

namespace esfts {

double kappa(const MatrixSchedule& gamma, const TimeGrid& grid) {
  double best = 0.0;
  for (double t : grid.nodes()) {
    const Vector ev = linalg::sym_eigenvalues(gamma.value(t));
    if (ev.minCoeff() <= 0.0) {
      throw Error(ErrorKind::kDefiniteness, "Gamma is not positive definite");
    }
    best = std::max(best, ev.maxCoeff() / std::sqrt(ev.minCoeff()));
  }
  return best;
}

double eta(const FtsProblem& p, double ka, const TimeGrid& grid,
           EtaMethod method) {
  const int n = p.n;
  double best = 1.0;  // the propagator is the identity at t0
  if (method == EtaMethod::kTransition) {
    constexpr int kRefine = 10;
    const TimeGrid fine = grid.refined(kRefine);
    const double h = fine.step();
    Matrix phi = Matrix::Identity(n, n);
    auto f = [&](double t, const Matrix& x) -> Matrix {
      return averaged_matrix(p, ka, t) * x;
    };
    for (int i = 0; i < fine.intervals(); ++i) {
      const double t = fine.node(i);
      const Matrix k1 = f(t, phi);
      const Matrix k2 = f(t + 0.5 * h, phi + 0.5 * h * k1);
      const Matrix k3 = f(t + 0.5 * h, phi + 0.5 * h * k2);
      const Matrix k4 = f(t + h, phi + h * k3);
      phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if ((i + 1) % kRefine == 0) {
        best = std::max(best, linalg::spectral_norm(phi));
      }
    }
    return best;
  }
  Matrix integral = Matrix::Zero(n, n);
  Matrix prev = averaged_matrix(p, ka, grid.node(0));
  for (int k = 1; k <= grid.intervals(); ++k) {
    const Matrix cur = averaged_matrix(p, ka, grid.node(k));
    integral += 0.5 * (grid.node(k) - grid.node(k - 1)) * (prev + cur);
    best = std::max(best, linalg::spectral_norm(linalg::expm(integral)));
    prev = cur;
  }
  return best;
}

double input_norm(const FtsProblem& p, const TimeGrid& grid) {
  double best = 0.0;
  for (double t : grid.nodes()) best = std::max(best, p.b(t).norm());
  return best;
}

FrequencyBound min_frequency(double k, double alpha, double b_norm,
                             double kappa_value, double eta_value,
                             double delta) {
  if (!(k > 0.0) || !(alpha > 0.0) || !(b_norm > 0.0) || !(kappa_value > 0.0) ||
      !(eta_value > 0.0) || !(delta > 0.0)) {
    throw Error(ErrorKind::kDomain,
                "frequency bound needs positive k, alpha, |B|, kappa, eta, Delta");
  }
  const double rho = delta / ((alpha + k) * eta_value * b_norm);
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorKind::kDomain, "frequency bound right-hand side is not positive");
  }
  const double c = k * kappa_value * b_norm;
  // Positive root of c u^2 + 2 u - rho = 0 in the cancellation-free form
  // u = 2 rho / (2 + sqrt(4 + 4 c rho)); c -> 0 gives u = rho / 2.
  const double u = 2.0 * rho / (2.0 + std::sqrt(4.0 + 4.0 * c * rho));
  FrequencyBound out;
  out.kappa = kappa_value;
  out.eta = eta_value;
  out.b_norm = b_norm;
  out.omega_1st = (2.0 / rho) * (2.0 / rho);
  out.omega_2nd = std::max(1.0 / (u * u), out.omega_1st);
  return out;
}

BoundReport compute_bound(const FtsProblem& p, double ka, double k,
                          double alpha, const TimeGrid& grid) {
  BoundReport report;
  report.ka = ka;
  report.k = k;
  report.alpha = alpha;
  const double kap = kappa(p.Gamma, grid);
  const double eta_tr = eta(p, ka, grid, EtaMethod::kTransition);
  report.eta_exp_integral = eta(p, ka, grid, EtaMethod::kExpOfIntegral);
  report.bound =
      min_frequency(k, alpha, input_norm(p, grid), kap, eta_tr, p.Delta);

  // Central differences for dGamma/dt, one-sided at the ends.
  const int N = grid.intervals();
  double scale = 0.0;
  for (int i = 0; i <= N; ++i) {
    const int lo = std::max(0, i - 1);
    const int hi = std::min(N, i + 1);
    const Matrix dgamma = (p.gamma(grid.node(hi)) - p.gamma(grid.node(lo))) /
                          (grid.node(hi) - grid.node(lo));
    const double t = grid.node(i);
    scale = std::max({scale, linalg::spectral_norm(dgamma),
                      linalg::spectral_norm(p.gamma(t) * p.a(t))});
  }
  report.regime_scale = scale;
  const double lhs = std::pow(report.bound.omega_2nd, 1.5);
  if (lhs < 100.0 * scale) {
    report.regime_ok = false;
    std::ostringstream os;
    os << "approximation regime questionable: omega^(3/2) = " << lhs
       << " < 100 * max_t(||dGamma/dt||, ||Gamma A||) = " << 100.0 * scale;
    report.warnings.push_back(os.str());
  }
  if (std::abs(report.eta_exp_integral - eta_tr) > 1e-6 * eta_tr) {
    std::ostringstream os;
    os << "eta methods disagree (transition " << eta_tr
       << ", exp-of-integral " << report.eta_exp_integral
       << "); the transition value is used";
    report.warnings.push_back(os.str());
  }
  return report;
}

}  // namespace esfts

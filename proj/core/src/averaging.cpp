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

#include "esfts/averaging.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace esfts {

namespace {

double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  }
  return acc * h / 3.0;
}

void check_fast_input(const FastInput& u, double period, double t) {
  const double mean =
      simpson([&](double th) { return u(t, th); }, 0.0, period, kSimpsonPanels) /
      period;
  if (std::abs(mean) > 1e-8) {
    std::ostringstream os;
    os << "fast input has non-zero average " << mean << " over its period";
    throw Error(ErrorKind::kContract, os.str());
  }
  const double u0 = u(t, 0.0);
  const double u1 = u(t, period);
  if (std::abs(u0 - u1) > 1e-8 * std::max(1.0, std::abs(u0))) {
    throw Error(ErrorKind::kContract, "fast input is not periodic in theta");
  }
}

}  // namespace

double nu_coefficient(const FastInput& u_i, const FastInput& u_j, double period,
                      double t) {
  if (!(period > 0.0)) {
    throw Error(ErrorKind::kDomain, "period must be positive");
  }
  check_fast_input(u_i, period, t);
  check_fast_input(u_j, period, t);
  // Inner integral I(theta) = int_0^theta u_i ds, Simpson on each outer node.
  auto inner = [&](double theta) {
    if (theta == 0.0) return 0.0;
    return simpson([&](double s) { return u_i(t, s); }, 0.0, theta,
                   kSimpsonPanels);
  };
  return simpson([&](double theta) { return inner(theta) * u_j(t, theta); },
                 0.0, period, kSimpsonPanels);
}

Matrix numeric_jacobian(const VectorField& f, const Vector& x) {
  const double h = 1e-6 * (1.0 + x.norm());
  const Vector f0 = f(x);
  Matrix jac(f0.size(), x.size());
  Vector xp = x;
  Vector xm = x;
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    xp(c) = x(c) + h;
    xm(c) = x(c) - h;
    jac.col(c) = (f(xp) - f(xm)) / (2.0 * h);
    xp(c) = x(c);
    xm(c) = x(c);
  }
  return jac;
}

Vector lie_bracket(const VectorField& b_i, const VectorField& b_j,
                   const Vector& x) {
  return numeric_jacobian(b_j, x) * b_i(x) - numeric_jacobian(b_i, x) * b_j(x);
}

DitheredField::DitheredField(std::vector<VectorField> fields,
                             std::vector<FastInput> inputs, double period,
                             double t)
    : fields_(std::move(fields)),
      inputs_(std::move(inputs)),
      period_(period) {
  if (fields_.size() != inputs_.size()) {
    throw Error(ErrorKind::kContract,
                "dithered field needs one fast input per vector field");
  }
  if (!(period_ > 0.0)) {
    throw Error(ErrorKind::kDomain, "period must be positive");
  }
  const auto m = static_cast<Eigen::Index>(fields_.size());
  nu_ = Matrix::Zero(m, m);
  for (const auto& u : inputs_) check_fast_input(u, period_, t);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      nu_(i, j) = nu_coefficient(inputs_[static_cast<std::size_t>(i)],
                                 inputs_[static_cast<std::size_t>(j)], period_,
                                 t);
    }
  }
}

Vector averaged_field(const VectorField& drift, const DitheredField& d,
                      const Vector& x) {
  Vector out = drift(x);
  const auto& fields = d.fields();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (std::size_t j = i + 1; j < fields.size(); ++j) {
      const double nu = d.nu()(static_cast<Eigen::Index>(i),
                               static_cast<Eigen::Index>(j));
      if (nu == 0.0) continue;
      out += lie_bracket(fields[i], fields[j], x) * (nu / d.period());
    }
  }
  return out;
}

DitheredField es_dithered_field(const FtsProblem& p, double k, double alpha,
                                double t) {
  const Vector b = p.b(t);
  const Matrix pi = p.pi(t);
  std::vector<VectorField> fields{
      [b, alpha](const Vector&) -> Vector { return alpha * b; },
      [b, pi, k](const Vector& x) -> Vector {
        return -k * b * x.dot(pi * x);
      }};
  std::vector<FastInput> inputs{
      [](double, double th) { return std::cos(th); },
      [](double, double th) { return std::sin(th); }};
  return DitheredField(std::move(fields), std::move(inputs),
                       2.0 * std::numbers::pi, t);
}

VectorField es_drift(const FtsProblem& p, double t) {
  const Matrix a = p.a(t);
  return [a](const Vector& x) -> Vector { return a * x; };
}

Matrix averaged_matrix(const FtsProblem& p, double ka, double t) {
  const Vector b = p.b(t);
  return p.a(t) - ka * b * (b.transpose() * p.pi(t));
}

MatrixSchedule averaged_closed_loop(const FtsProblem& p, double ka,
                                    const TimeGrid& grid) {
  if (!(ka >= 0.0)) throw Error(ErrorKind::kDomain, "ka must be >= 0");
  std::vector<MatrixSchedule::Sample> samples;
  samples.reserve(static_cast<std::size_t>(grid.intervals()) + 1);
  for (double t : grid.nodes()) {
    samples.push_back({t, averaged_matrix(p, ka, t)});
  }
  return MatrixSchedule::sampled(std::move(samples));
}

}  // namespace esfts

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

#include "esfts/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "esfts/linalg.hpp"

namespace esfts {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kDimension: return "dimension error";
    case ErrorKind::kSymmetry: return "symmetry error";
    case ErrorKind::kDefiniteness: return "definiteness error";
    case ErrorKind::kWellPosedness: return "well-posedness error";
    case ErrorKind::kShrinkageInfeasible: return "shrinkage-infeasible error";
    case ErrorKind::kDeltaTooLarge: return "delta-too-large error";
    case ErrorKind::kGrid: return "grid error";
    case ErrorKind::kContract: return "contract error";
    case ErrorKind::kAssembly: return "assembly error";
    case ErrorKind::kSolver: return "solver error";
    case ErrorKind::kSynthesisFailed: return "synthesis-failed error";
    case ErrorKind::kDivergence: return "divergence error";
    case ErrorKind::kIo: return "i/o error";
  }
  return "error";
}

// ---------------------------------------------------------------------------
// ScalarProfile

ScalarProfile ScalarProfile::cosine(double period) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw Error(ErrorKind::kConfig, "cosine profile needs a positive period");
  }
  return ScalarProfile(Shape::kCosine, period, 0.0);
}

ScalarProfile ScalarProfile::exp_rate(double rate) {
  if (!std::isfinite(rate)) {
    throw Error(ErrorKind::kConfig, "exp_rate profile needs a finite rate");
  }
  return ScalarProfile(Shape::kExpRate, rate, 0.0);
}

ScalarProfile ScalarProfile::affine(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorKind::kConfig, "affine profile needs finite a, b");
  }
  return ScalarProfile(Shape::kAffine, a, b);
}

ScalarProfile ScalarProfile::from_name(std::string_view name,
                                       const std::vector<double>& params) {
  auto expect = [&](std::size_t count) {
    if (params.size() != count) {
      std::ostringstream os;
      os << "profile '" << name << "' takes " << count << " parameter(s), got "
         << params.size();
      throw Error(ErrorKind::kConfig, os.str());
    }
  };
  if (name == "one") {
    expect(0);
    return one();
  }
  if (name == "cosine") {
    expect(1);
    return cosine(params[0]);
  }
  if (name == "exp_rate") {
    expect(1);
    return exp_rate(params[0]);
  }
  if (name == "affine") {
    expect(2);
    return affine(params[0], params[1]);
  }
  throw Error(ErrorKind::kConfig,
              "unknown scalar profile '" + std::string(name) + "'");
}

double ScalarProfile::operator()(double t) const {
  switch (shape_) {
    case Shape::kOne: return 1.0;
    case Shape::kCosine: return std::cos(2.0 * std::numbers::pi * t / p0_);
    case Shape::kExpRate: return std::exp(p0_ * t);
    case Shape::kAffine: return p0_ + p1_ * t;
  }
  return 0.0;
}

double ScalarProfile::derivative(double t) const {
  switch (shape_) {
    case Shape::kOne: return 0.0;
    case Shape::kCosine: {
      const double w = 2.0 * std::numbers::pi / p0_;
      return -w * std::sin(w * t);
    }
    case Shape::kExpRate: return p0_ * std::exp(p0_ * t);
    case Shape::kAffine: return p1_;
  }
  return 0.0;
}

std::string ScalarProfile::name() const {
  switch (shape_) {
    case Shape::kOne: return "one";
    case Shape::kCosine: return "cosine";
    case Shape::kExpRate: return "exp_rate";
    case Shape::kAffine: return "affine";
  }
  return "";
}

std::vector<double> ScalarProfile::params() const {
  switch (shape_) {
    case Shape::kOne: return {};
    case Shape::kCosine:
    case Shape::kExpRate: return {p0_};
    case Shape::kAffine: return {p0_, p1_};
  }
  return {};
}

// ---------------------------------------------------------------------------
// MatrixSchedule

MatrixSchedule MatrixSchedule::constant(Matrix value) {
  MatrixSchedule s(std::move(value));
  s.kind_ = Kind::kConstant;
  return s;
}

MatrixSchedule MatrixSchedule::sampled(std::vector<Sample> samples) {
  if (samples.empty()) {
    throw Error(ErrorKind::kConfig, "sampled schedule needs at least one sample");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].t)) {
      throw Error(ErrorKind::kConfig, "sample time is not finite");
    }
    if (i > 0 && !(samples[i].t > samples[i - 1].t)) {
      throw Error(ErrorKind::kConfig,
                  "sample times must be strictly increasing");
    }
    if (samples[i].value.rows() != samples[0].value.rows() ||
        samples[i].value.cols() != samples[0].value.cols()) {
      throw Error(ErrorKind::kDimension,
                  "all samples of a schedule must share dimensions");
    }
  }
  MatrixSchedule s(samples.front().value);
  s.kind_ = Kind::kSampledLinear;
  s.samples_ = std::move(samples);
  return s;
}

MatrixSchedule MatrixSchedule::profile(Matrix base, ScalarProfile profile) {
  MatrixSchedule s(std::move(base));
  s.kind_ = Kind::kScalarProfile;
  s.profile_ = profile;
  return s;
}

Matrix MatrixSchedule::value(double t) const {
  switch (kind_) {
    case Kind::kConstant: return base_;
    case Kind::kScalarProfile: return (*profile_)(t) * base_;
    case Kind::kSampledLinear: break;
  }
  if (t <= samples_.front().t) return samples_.front().value;
  if (t >= samples_.back().t) return samples_.back().value;
  auto it = std::upper_bound(
      samples_.begin(), samples_.end(), t,
      [](double v, const Sample& s) { return v < s.t; });
  const Sample& hi = *it;
  const Sample& lo = *(it - 1);
  if (t == lo.t) return lo.value;
  const double w = (t - lo.t) / (hi.t - lo.t);
  return (1.0 - w) * lo.value + w * hi.value;
}

Matrix eval_schedule(const MatrixSchedule& s, double t, double t0,
                     double horizon) {
  const double tol = 1e-9 * std::abs(horizon);
  if (!std::isfinite(t) || t < t0 - tol || t > t0 + horizon + tol) {
    std::ostringstream os;
    os << "time " << t << " outside the horizon [" << t0 << ", "
       << t0 + horizon << "]";
    throw Error(ErrorKind::kDomain, os.str());
  }
  if (s.kind() == MatrixSchedule::Kind::kSampledLinear) {
    const auto& samples = s.samples();
    if (t < samples.front().t - tol || t > samples.back().t + tol) {
      std::ostringstream os;
      os << "time " << t << " outside the sampled range ["
         << samples.front().t << ", " << samples.back().t << "]";
      throw Error(ErrorKind::kDomain, os.str());
    }
  }
  return s.value(t);
}

// ---------------------------------------------------------------------------
// TimeGrid

TimeGrid TimeGrid::uniform(double t0, double horizon, int intervals) {
  if (!std::isfinite(t0) || !(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorKind::kGrid, "grid needs a finite t0 and positive horizon");
  }
  if (intervals < 2) {
    throw Error(ErrorKind::kGrid, "grid needs at least 2 intervals");
  }
  return TimeGrid(t0, horizon, intervals);
}

double TimeGrid::node(int k) const {
  if (k == intervals_) return t0_ + horizon_;
  return t0_ + horizon_ * (static_cast<double>(k) / intervals_);
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> out(static_cast<std::size_t>(intervals_) + 1);
  for (int k = 0; k <= intervals_; ++k) out[static_cast<std::size_t>(k)] = node(k);
  return out;
}

// ---------------------------------------------------------------------------
// FtsProblem

FtsProblem negate_input(const FtsProblem& p) {
  FtsProblem out = p;
  out.B = p.B.map([](const Matrix& m) -> Matrix { return -m; });
  return out;
}

namespace {

std::string at_node(const char* what, int k, double t) {
  std::ostringstream os;
  os << what << " at grid node " << k << " (t = " << t << ")";
  return os.str();
}

void check_dims(const char* what, const MatrixSchedule& s, Eigen::Index rows,
                Eigen::Index cols) {
  if (s.rows() != rows || s.cols() != cols) {
    std::ostringstream os;
    os << what << " must be " << rows << "x" << cols << ", got " << s.rows()
       << "x" << s.cols();
    throw Error(ErrorKind::kDimension, os.str());
  }
}

}  // namespace

FtsProblem validate_problem(const FtsProblem& p, const TimeGrid& grid) {
  if (p.n < 1) throw Error(ErrorKind::kDimension, "state dimension must be >= 1");
  check_dims("A", p.A, p.n, p.n);
  check_dims("B", p.B, p.n, 1);
  check_dims("Gamma", p.Gamma, p.n, p.n);
  check_dims("Pi", p.Pi, p.n, p.n);
  if (p.R.rows() != p.n || p.R.cols() != p.n) {
    throw Error(ErrorKind::kDimension, "R must be n x n");
  }
  if (!(p.T > 0.0) || !std::isfinite(p.T) || !std::isfinite(p.t0)) {
    throw Error(ErrorKind::kConfig, "horizon T must be positive and finite");
  }
  if (!(p.Delta >= 0.0) || !std::isfinite(p.Delta)) {
    throw Error(ErrorKind::kConfig, "Delta must be a finite non-negative number");
  }
  const double scale = std::max(1.0, std::abs(p.t0) + p.T);
  if (std::abs(grid.t0() - p.t0) > 1e-12 * scale ||
      std::abs(grid.horizon() - p.T) > 1e-12 * scale) {
    throw Error(ErrorKind::kGrid, "grid does not span the problem horizon");
  }

  if (!linalg::is_symmetric(p.R)) {
    throw Error(ErrorKind::kSymmetry, "R is not symmetric");
  }
  if (!linalg::is_positive_definite(p.R)) {
    throw Error(ErrorKind::kDefiniteness, "R is not positive definite");
  }

  double gamma_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid.intervals(); ++k) {
    const double t = grid.node(k);
    // Evaluating A and B here also checks sampled schedules cover the grid.
    (void)p.a(t);
    (void)p.b(t);
    const Matrix g = p.gamma(t);
    const Matrix pi = p.pi(t);
    if (!linalg::is_symmetric(g)) {
      throw Error(ErrorKind::kSymmetry, at_node("Gamma is not symmetric", k, t));
    }
    if (!linalg::is_symmetric(pi)) {
      throw Error(ErrorKind::kSymmetry, at_node("Pi is not symmetric", k, t));
    }
    if (!linalg::is_positive_definite(g)) {
      throw Error(ErrorKind::kDefiniteness,
                  at_node("Gamma is not positive definite", k, t));
    }
    if (!linalg::is_positive_definite(pi)) {
      throw Error(ErrorKind::kDefiniteness,
                  at_node("Pi is not positive definite", k, t));
    }
    gamma_min = std::min(gamma_min, 1.0 / std::sqrt(linalg::max_eigenvalue(g)));
  }

  const Matrix gap = p.R - p.gamma(p.t0);
  if (!(linalg::min_eigenvalue(gap) >
        linalg::kDefinitenessTol * linalg::spectral_norm(p.R))) {
    throw Error(ErrorKind::kWellPosedness,
                "Gamma(t0) is not strictly smaller than R");
  }
  if (p.Delta >= gamma_min) {
    std::ostringstream os;
    os << "Delta = " << p.Delta << " is not below min_t,i gamma_i = "
       << gamma_min;
    throw Error(ErrorKind::kShrinkageInfeasible, os.str());
  }

  FtsProblem out = p;
  out.R = linalg::symmetrize(p.R);
  out.Gamma = p.Gamma.map([](const Matrix& m) { return linalg::symmetrize(m); });
  out.Pi = p.Pi.map([](const Matrix& m) { return linalg::symmetrize(m); });
  return out;
}

void validate_controller(const ControllerParams& c) {
  if (!(c.k > 0.0) || !(c.alpha > 0.0) || !(c.omega > 0.0) ||
      !std::isfinite(c.k) || !std::isfinite(c.alpha) ||
      !std::isfinite(c.omega)) {
    throw Error(ErrorKind::kDomain,
                "controller parameters k, alpha, omega must be positive");
  }
}

}  // namespace esfts

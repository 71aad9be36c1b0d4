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

#ifndef ESFTS_CORE_HPP_
#define ESFTS_CORE_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace esfts {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Error categories raised by the library. The CLI maps them onto exit codes.
enum class ErrorKind {
  kDomain,               // argument outside the admissible domain
  kConfig,               // malformed configuration or schedule description
  kDimension,            // inconsistent matrix dimensions
  kSymmetry,             // matrix expected symmetric is not
  kDefiniteness,         // matrix expected positive definite is not
  kWellPosedness,        // Gamma(t0) is not strictly inside R
  kShrinkageInfeasible,  // Delta >= min_i gamma_i
  kDeltaTooLarge,        // shrunk GammaBar(t0) is not strictly inside R
  kGrid,                 // time grid unusable for the requested operation
  kContract,             // precondition of an operation violated
  kAssembly,             // LMI assembly failure (singular caps, ...)
  kSolver,               // numerical solver failure
  kSynthesisFailed,      // no feasible gain product in the scan range
  kDivergence,           // simulation blew up
  kIo,                   // file system / parse errors
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Scalar time profile p(t) multiplying a fixed matrix.
class ScalarProfile {
 public:
  enum class Shape { kOne, kCosine, kExpRate, kAffine };

  static ScalarProfile one() { return ScalarProfile(Shape::kOne, 0.0, 0.0); }
  /// cos(2*pi*t/period)
  static ScalarProfile cosine(double period);
  /// exp(rate*t)
  static ScalarProfile exp_rate(double rate);
  /// a + b*t
  static ScalarProfile affine(double a, double b);

  /// Builds a profile from its configuration name; unknown names are a
  /// config error.
  static ScalarProfile from_name(std::string_view name,
                                 const std::vector<double>& params);

  double operator()(double t) const;
  double derivative(double t) const;

  Shape shape() const { return shape_; }
  std::string name() const;
  /// Parameters in the order accepted by from_name.
  std::vector<double> params() const;

 private:
  ScalarProfile(Shape shape, double p0, double p1)
      : shape_(shape), p0_(p0), p1_(p1) {}

  Shape shape_;
  double p0_;
  double p1_;
};

/// A real matrix valued function of time M(t).
class MatrixSchedule {
 public:
  enum class Kind { kConstant, kSampledLinear, kScalarProfile };

  struct Sample {
    double t;
    Matrix value;
  };

  MatrixSchedule() : MatrixSchedule(Matrix::Zero(0, 0)) {}

  static MatrixSchedule constant(Matrix value);
  /// Times must be strictly increasing; all samples share dimensions.
  static MatrixSchedule sampled(std::vector<Sample> samples);
  static MatrixSchedule profile(Matrix base, ScalarProfile profile);

  Kind kind() const { return kind_; }
  Eigen::Index rows() const { return base_.rows(); }
  Eigen::Index cols() const { return base_.cols(); }

  /// Constant value / profile base. For sampled schedules, the first sample.
  const Matrix& base() const { return base_; }
  const std::vector<Sample>& samples() const { return samples_; }
  const std::optional<ScalarProfile>& scalar_profile() const {
    return profile_;
  }

  /// Evaluation without a domain check. Sampled schedules clamp to the
  /// end samples.
  Matrix value(double t) const;

  /// Returns a copy whose every stored matrix is f(matrix).
  template <typename F>
  MatrixSchedule map(F&& f) const {
    MatrixSchedule out = *this;
    out.base_ = f(base_);
    for (auto& s : out.samples_) s.value = f(s.value);
    return out;
  }

 private:
  explicit MatrixSchedule(Matrix base) : base_(std::move(base)) {}

  Kind kind_ = Kind::kConstant;
  Matrix base_;
  std::vector<Sample> samples_;
  std::optional<ScalarProfile> profile_;
};

/// Evaluates a schedule on the horizon [t0, t0+T]. Points outside the
/// horizon (beyond 1e-9*T) and, for sampled schedules, outside the sample
/// range raise a domain error.
Matrix eval_schedule(const MatrixSchedule& s, double t, double t0,
                     double horizon);

/// Uniform grid t0 = tau_0 < ... < tau_N = t0 + T.
class TimeGrid {
 public:
  static TimeGrid uniform(double t0, double horizon, int intervals);

  double t0() const { return t0_; }
  double horizon() const { return horizon_; }
  double tf() const { return t0_ + horizon_; }
  int intervals() const { return intervals_; }
  double step() const { return horizon_ / intervals_; }
  double node(int k) const;
  std::vector<double> nodes() const;

  TimeGrid refined(int factor) const {
    return uniform(t0_, horizon_, intervals_ * factor);
  }

 private:
  TimeGrid(double t0, double horizon, int intervals)
      : t0_(t0), horizon_(horizon), intervals_(intervals) {}

  double t0_;
  double horizon_;
  int intervals_;
};

/// Plant (A(t), B(t)) with finite-time stability data.
struct FtsProblem {
  int n = 0;
  MatrixSchedule A;      // n x n
  MatrixSchedule B;      // n x 1
  Matrix R;              // n x n, symmetric PD
  MatrixSchedule Gamma;  // n x n, symmetric PD on the horizon
  MatrixSchedule Pi;     // n x n, symmetric PD on the horizon
  double t0 = 0.0;
  double T = 1.0;
  double Delta = 0.0;  // max allowed |x - xbar|

  double tf() const { return t0 + T; }
  Matrix a(double t) const { return eval_schedule(A, t, t0, T); }
  Vector b(double t) const { return eval_schedule(B, t, t0, T).col(0); }
  Matrix gamma(double t) const { return eval_schedule(Gamma, t, t0, T); }
  Matrix pi(double t) const { return eval_schedule(Pi, t, t0, T); }
};

/// Returns the problem with B replaced by -B.
FtsProblem negate_input(const FtsProblem& p);

/// Checks every FtsProblem invariant at the grid nodes and returns a copy
/// with the symmetric data symmetrized as (M + M^T)/2.
FtsProblem validate_problem(const FtsProblem& p, const TimeGrid& grid);

struct ControllerParams {
  double k = 0.0;
  double alpha = 0.0;
  double omega = 0.0;  // rad/s
  double phase = 0.0;  // dither phase offset
};

/// Throws a domain error unless k, alpha and omega are strictly positive.
void validate_controller(const ControllerParams& c);

}  // namespace esfts

#endif  // ESFTS_CORE_HPP_

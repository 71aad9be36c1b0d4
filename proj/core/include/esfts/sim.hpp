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

#ifndef ESFTS_SIM_HPP_
#define ESFTS_SIM_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "esfts/core.hpp"
#include "esfts/geometry.hpp"

namespace esfts {

enum class TrajectoryKind { kClosedLoop, kAveraged, kOpenLoop };

std::string_view to_string(TrajectoryKind kind);

/// Uniformly stepped state history; column i of `states` is x(times[i]).
struct Trajectory {
  TrajectoryKind kind = TrajectoryKind::kClosedLoop;
  std::vector<double> times;
  Matrix states;

  std::size_t size() const { return times.size(); }
  double step() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  Vector state(std::size_t i) const {
    return states.col(static_cast<Eigen::Index>(i));
  }
};

/// Thrown by the integrators when |x| exceeds 1e6.
class DivergenceError : public Error {
 public:
  DivergenceError(double time, const std::string& what)
      : Error(ErrorKind::kDivergence, what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

inline constexpr double kDivergenceCap = 1e6;
inline constexpr int kDefaultStepsPerPeriod = 40;
inline constexpr std::size_t kMaxReportSamples = 20000;

/// Fixed RK4 step for the dithered loop: min(2 pi / (omega spp), T / 10000),
/// shortened so an integer number of steps spans the horizon.
double closed_loop_step(const FtsProblem& p, double omega,
                        int steps_per_period = kDefaultStepsPerPeriod);

/// x' = A x + B [alpha sqrt(w) cos(w t + phase) - k sqrt(w) sin(w t + phase) x^T Pi x]
Trajectory simulate_closed_loop(const FtsProblem& p, const ControllerParams& c,
                                const Vector& x0,
                                int steps_per_period = kDefaultStepsPerPeriod);

/// xbar' = (A - ka B B^T Pi) xbar with fixed step (<= T/1000).
Trajectory simulate_averaged(const FtsProblem& p, double ka, const Vector& x0,
                             double dt);

/// x' = A x with fixed step.
Trajectory simulate_open_loop(const FtsProblem& p, const Vector& x0, double dt);

/// Keeps at most max_samples evenly spaced samples, always including both
/// ends.
Trajectory decimate(const Trajectory& x, std::size_t max_samples = kMaxReportSamples);

struct RunMetrics {
  double max_dist = 0.0;   // max |x - xbar|
  double max_v = 0.0;      // max x^T Gamma x
  double max_v_avg = 0.0;  // max xbar^T GammaBar xbar
  bool fts_ok = false;     // max_v < 1
  bool dist_ok = false;    // max_dist < Delta
};

/// Metrics on the fine grids. Averaged samples are paired with the nearest
/// closed-loop sample; grids that do not align raise a contract error.
/// Without GammaBar, max_v_avg uses Gamma.
RunMetrics trajectory_metrics(const Trajectory& x, const Trajectory& xbar,
                              const FtsProblem& p,
                              const MatrixSchedule* gamma_bar = nullptr);

struct RunRecord {
  std::size_t index = 0;
  Vector x0;
  RunMetrics metrics;
  bool diverged = false;
  std::string failure;  // divergence message
  bool passed() const { return !diverged && metrics.fts_ok && metrics.dist_ok; }
};

struct SuiteSummary {
  std::size_t runs = 0;
  std::size_t passes = 0;
  std::size_t fts_passes = 0;
  std::size_t dist_passes = 0;
  double worst_max_dist = 0.0;
  double worst_max_v = 0.0;
  std::size_t worst_run = 0;  // run with the largest max_v
  std::vector<RunRecord> records;
  bool all_passed() const { return passes == runs; }
};

struct VerificationReport {
  std::uint64_t seed = 0;
  ControllerParams controller;
  double ka = 0.0;
  SuiteSummary nominal;
  SuiteSummary sign_flip;
  bool passed() const { return nominal.all_passed() && sign_flip.all_passed(); }
};

struct VerifyOptions {
  int steps_per_period = kDefaultStepsPerPeriod;
  int jobs = 1;
  bool sign_flip = true;
  std::optional<Vector> forced_x0;  // use this x0 for every run
  const MatrixSchedule* gamma_bar = nullptr;
};

/// Initial state with uniform random direction and x0^T R x0 uniform on
/// [0.8, 1], drawn from a stream keyed by (seed, run).
Vector sample_initial_state(const Matrix& R, std::uint64_t seed,
                            std::size_t run);

VerificationReport monte_carlo_verify(const FtsProblem& p,
                                      const ControllerParams& c, double ka,
                                      int runs, std::uint64_t seed,
                                      const VerifyOptions& options = {});

/// max |x - xbar| for each omega (increasing), with k, alpha from `base`.
std::vector<std::pair<double, double>> convergence_study(
    const FtsProblem& p, const ControllerParams& base, double ka,
    const std::vector<double>& omegas, const Vector& x0,
    int steps_per_period = kDefaultStepsPerPeriod);

/// Relative change of max |x - xbar| when steps_per_period doubles from
/// `steps_per_period`. Runs changing by 1% or more are under-resolved.
double dither_resolution_change(const FtsProblem& p, const ControllerParams& c,
                                double ka, const Vector& x0,
                                int steps_per_period = kDefaultStepsPerPeriod);

}  // namespace esfts

#endif  // ESFTS_SIM_HPP_

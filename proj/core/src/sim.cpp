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

#include "esfts/sim.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "esfts/averaging.hpp"

namespace esfts {

std::string_view to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::kClosedLoop: return "closed_loop";
    case TrajectoryKind::kAveraged: return "averaged";
    case TrajectoryKind::kOpenLoop: return "open_loop";
  }
  return "";
}

namespace {

int step_count(double horizon, double dt_max) {
  return static_cast<int>(std::ceil(horizon / dt_max - 1e-9));
}

template <typename Rhs>
Trajectory integrate_rk4(const FtsProblem& p, TrajectoryKind kind,
                         const Vector& x0, int steps, Rhs&& rhs) {
  if (x0.size() != p.n || !x0.allFinite()) {
    throw Error(ErrorKind::kContract, "initial state must be a finite n-vector");
  }
  Trajectory traj;
  traj.kind = kind;
  traj.times.resize(static_cast<std::size_t>(steps) + 1);
  traj.states.resize(p.n, steps + 1);
  const double h = p.T / steps;
  Vector x = x0;
  traj.times[0] = p.t0;
  traj.states.col(0) = x;
  for (int i = 0; i < steps; ++i) {
    const double t = p.t0 + p.T * (static_cast<double>(i) / steps);
    const Vector k1 = rhs(t, x);
    const Vector k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    const Vector k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    const Vector k4 = rhs(t + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t_next =
        i + 1 == steps ? p.tf() : p.t0 + p.T * (static_cast<double>(i + 1) / steps);
    if (!x.allFinite() || x.norm() > kDivergenceCap) {
      std::ostringstream os;
      os << to_string(kind) << " trajectory diverged (|x| > " << kDivergenceCap
         << ") at t = " << t_next;
      throw DivergenceError(t_next, os.str());
    }
    traj.times[static_cast<std::size_t>(i) + 1] = t_next;
    traj.states.col(i + 1) = x;
  }
  return traj;
}

}  // namespace

double closed_loop_step(const FtsProblem& p, double omega,
                        int steps_per_period) {
  if (!(omega > 0.0)) throw Error(ErrorKind::kDomain, "omega must be positive");
  if (steps_per_period < 1) {
    throw Error(ErrorKind::kDomain, "steps_per_period must be positive");
  }
  const double dt_max =
      std::min(2.0 * std::numbers::pi / (omega * steps_per_period), p.T / 10000.0);
  return p.T / step_count(p.T, dt_max);
}

Trajectory simulate_closed_loop(const FtsProblem& p, const ControllerParams& c,
                                const Vector& x0, int steps_per_period) {
  if (!(c.k >= 0.0) || !(c.alpha >= 0.0)) {
    throw Error(ErrorKind::kDomain, "k and alpha must be non-negative");
  }
  const double dt = closed_loop_step(p, c.omega, steps_per_period);
  const double sw = std::sqrt(c.omega);
  auto rhs = [&](double t, const Vector& x) -> Vector {
    const double th = c.omega * t + c.phase;
    const double v = x.dot(p.Pi.value(t) * x);
    const double u = c.alpha * sw * std::cos(th) - c.k * sw * std::sin(th) * v;
    return p.A.value(t) * x + p.B.value(t).col(0) * u;
  };
  return integrate_rk4(p, TrajectoryKind::kClosedLoop, x0,
                       step_count(p.T, dt), rhs);
}

Trajectory simulate_averaged(const FtsProblem& p, double ka, const Vector& x0,
                             double dt) {
  if (!(dt > 0.0) || dt > p.T / 1000.0 * (1.0 + 1e-12)) {
    throw Error(ErrorKind::kDomain, "averaged step must lie in (0, T/1000]");
  }
  auto rhs = [&](double t, const Vector& x) -> Vector {
    const Vector b = p.B.value(t).col(0);
    return p.A.value(t) * x - ka * b * b.dot(p.Pi.value(t) * x);
  };
  return integrate_rk4(p, TrajectoryKind::kAveraged, x0, step_count(p.T, dt),
                       rhs);
}

Trajectory simulate_open_loop(const FtsProblem& p, const Vector& x0, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::kDomain, "step must be positive");
  // Same right-hand side shape as the closed loop with zero input.
  auto rhs = [&](double t, const Vector& x) -> Vector {
    return p.A.value(t) * x + p.B.value(t).col(0) * 0.0;
  };
  return integrate_rk4(p, TrajectoryKind::kOpenLoop, x0, step_count(p.T, dt),
                       rhs);
}

Trajectory decimate(const Trajectory& x, std::size_t max_samples) {
  if (max_samples < 2 || x.size() <= max_samples) return x;
  const std::size_t stride = (x.size() - 1 + max_samples - 2) / (max_samples - 1);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < x.size(); i += stride) keep.push_back(i);
  if (keep.back() != x.size() - 1) keep.push_back(x.size() - 1);
  Trajectory out;
  out.kind = x.kind;
  out.times.reserve(keep.size());
  out.states.resize(x.states.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    out.times.push_back(x.times[keep[j]]);
    out.states.col(static_cast<Eigen::Index>(j)) =
        x.states.col(static_cast<Eigen::Index>(keep[j]));
  }
  return out;
}

RunMetrics trajectory_metrics(const Trajectory& x, const Trajectory& xbar,
                              const FtsProblem& p,
                              const MatrixSchedule* gamma_bar) {
  if (x.size() < 2 || xbar.size() < 2) {
    throw Error(ErrorKind::kContract, "trajectories need at least two samples");
  }
  const double tol = 1e-9 * p.T;
  if (std::abs(x.times.front() - xbar.times.front()) > tol ||
      std::abs(x.times.back() - xbar.times.back()) > tol ||
      x.states.rows() != xbar.states.rows()) {
    throw Error(ErrorKind::kContract, "trajectories do not share a time base");
  }
  RunMetrics m;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Vector s = x.state(i);
    m.max_v = std::max(m.max_v, s.dot(p.Gamma.value(x.times[i]) * s));
  }
  const double dx = x.step();
  for (std::size_t i = 0; i < xbar.size(); ++i) {
    const double t = xbar.times[i];
    const auto j = static_cast<std::size_t>(
        std::llround((t - x.times.front()) / dx));
    if (j >= x.size() || std::abs(x.times[j] - t) > tol) {
      throw Error(ErrorKind::kContract,
                  "averaged sample has no matching closed-loop sample");
    }
    const Vector sb = xbar.state(i);
    m.max_dist = std::max(m.max_dist, (x.state(j) - sb).norm());
    const Matrix g = gamma_bar ? gamma_bar->value(t) : p.Gamma.value(t);
    m.max_v_avg = std::max(m.max_v_avg, sb.dot(g * sb));
  }
  m.fts_ok = m.max_v < 1.0;
  m.dist_ok = m.max_dist < p.Delta;
  return m;
}

Vector sample_initial_state(const Matrix& R, std::uint64_t seed,
                            std::size_t run) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(run) >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> level(0.8, 1.0);
  Vector d(R.rows());
  do {
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = normal(rng);
  } while (d.norm() < 1e-12);
  d.normalize();
  const double s = level(rng);
  return d * std::sqrt(s / d.dot(R * d));
}

namespace {

RunRecord run_once(const FtsProblem& p, const ControllerParams& c, double ka,
                   const Vector& x0, std::size_t index,
                   const VerifyOptions& options) {
  RunRecord rec;
  rec.index = index;
  rec.x0 = x0;
  try {
    const Trajectory x = simulate_closed_loop(p, c, x0, options.steps_per_period);
    const Trajectory xbar = simulate_averaged(p, ka, x0, x.step());
    rec.metrics = trajectory_metrics(x, xbar, p, options.gamma_bar);
  } catch (const DivergenceError& e) {
    rec.diverged = true;
    rec.failure = e.what();
  }
  return rec;
}

SuiteSummary run_suite(const FtsProblem& p, const ControllerParams& c,
                       double ka, const std::vector<Vector>& x0s,
                       const VerifyOptions& options) {
  SuiteSummary suite;
  suite.runs = x0s.size();
  suite.records.resize(x0s.size());
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, options.jobs));
  for (std::size_t first = 0; first < x0s.size(); first += jobs) {
    const std::size_t last = std::min(x0s.size(), first + jobs);
    if (last - first == 1) {
      suite.records[first] = run_once(p, c, ka, x0s[first], first, options);
      continue;
    }
    std::vector<std::future<RunRecord>> futures;
    for (std::size_t i = first; i < last; ++i) {
      futures.push_back(std::async(std::launch::async, [&, i] {
        return run_once(p, c, ka, x0s[i], i, options);
      }));
    }
    for (std::size_t i = first; i < last; ++i) {
      suite.records[i] = futures[i - first].get();
    }
  }
  // Worst run: the first divergence if any, otherwise the largest max_v.
  std::optional<std::size_t> diverged;
  for (const auto& rec : suite.records) {
    if (rec.passed()) ++suite.passes;
    if (rec.diverged) {
      if (!diverged) diverged = rec.index;
      continue;
    }
    if (rec.metrics.fts_ok) ++suite.fts_passes;
    if (rec.metrics.dist_ok) ++suite.dist_passes;
    suite.worst_max_dist = std::max(suite.worst_max_dist, rec.metrics.max_dist);
    if (rec.metrics.max_v > suite.worst_max_v) {
      suite.worst_max_v = rec.metrics.max_v;
      suite.worst_run = rec.index;
    }
  }
  if (diverged) {
    suite.worst_run = *diverged;
    suite.worst_max_dist = std::numeric_limits<double>::infinity();
    suite.worst_max_v = std::numeric_limits<double>::infinity();
  }
  return suite;
}

}  // namespace

VerificationReport monte_carlo_verify(const FtsProblem& p,
                                      const ControllerParams& c, double ka,
                                      int runs, std::uint64_t seed,
                                      const VerifyOptions& options) {
  if (runs < 1) throw Error(ErrorKind::kDomain, "runs must be >= 1");
  if (!(c.omega > 0.0)) throw Error(ErrorKind::kDomain, "omega must be positive");
  std::vector<Vector> x0s;
  x0s.reserve(static_cast<std::size_t>(runs));
  for (int i = 0; i < runs; ++i) {
    x0s.push_back(options.forced_x0 ? *options.forced_x0
                                    : sample_initial_state(p.R, seed, static_cast<std::size_t>(i)));
  }
  VerificationReport report;
  report.seed = seed;
  report.controller = c;
  report.ka = ka;
  report.nominal = run_suite(p, c, ka, x0s, options);
  if (options.sign_flip) {
    report.sign_flip = run_suite(negate_input(p), c, ka, x0s, options);
  }
  return report;
}

std::vector<std::pair<double, double>> convergence_study(
    const FtsProblem& p, const ControllerParams& base, double ka,
    const std::vector<double>& omegas, const Vector& x0, int steps_per_period) {
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (!(omegas[i] > 0.0) || (i > 0 && !(omegas[i] > omegas[i - 1]))) {
      throw Error(ErrorKind::kContract, "omegas must be positive and increasing");
    }
  }
  std::vector<std::pair<double, double>> out;
  for (double omega : omegas) {
    ControllerParams c = base;
    c.omega = omega;
    const Trajectory x = simulate_closed_loop(p, c, x0, steps_per_period);
    const Trajectory xbar = simulate_averaged(p, ka, x0, x.step());
    out.emplace_back(omega, trajectory_metrics(x, xbar, p).max_dist);
  }
  return out;
}

double dither_resolution_change(const FtsProblem& p, const ControllerParams& c,
                                double ka, const Vector& x0,
                                int steps_per_period) {
  auto dist = [&](int spp) {
    const Trajectory x = simulate_closed_loop(p, c, x0, spp);
    const Trajectory xbar = simulate_averaged(p, ka, x0, x.step());
    return trajectory_metrics(x, xbar, p).max_dist;
  };
  const double coarse = dist(steps_per_period);
  const double fine = dist(2 * steps_per_period);
  return std::abs(fine - coarse) / std::max(fine, 1e-300);
}

}  // namespace esfts

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

#ifndef ESFTS_DLMI_HPP_
#define ESFTS_DLMI_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "esfts/core.hpp"
#include "esfts/geometry.hpp"
#include "esfts/sdp.hpp"

namespace esfts {

/// Variable layout of the discretized DLMI: the upper triangle of every
/// node matrix Q_k (row-major, a <= b), node after node, then the margin.
class DlmiLayout {
 public:
  DlmiLayout(int n, int intervals) : n_(n), intervals_(intervals) {}

  int n() const { return n_; }
  int per_node() const { return n_ * (n_ + 1) / 2; }
  int num_vars() const { return (intervals_ + 1) * per_node() + 1; }
  int margin_var() const { return num_vars() - 1; }
  int var(int node, int a, int b) const;

  /// Symmetric basis matrix multiplying the (a, b) entry variable.
  Matrix basis(int a, int b) const;

  Vector pack(const std::vector<Matrix>& q, double margin) const;
  std::vector<Matrix> unpack(const Vector& y) const;

 private:
  int n_;
  int intervals_;
};

/// Block counts: 2N interval blocks, N+1 caps, one initial-condition block.
SdpProblem assemble_lmi(const FtsProblem& p, const ShrunkSpec& spec, double ka,
                        const TimeGrid& grid);

struct GainSchedule {
  MatrixSchedule K;  // 1 x n, sampled on the grid
  double k = 0.0;
  double alpha = 0.0;
};

/// K(tau) = -ka B(tau)^T Pi(tau). Without a split, k = alpha = sqrt(ka).
GainSchedule extract_gain(const FtsProblem& p, double ka, const TimeGrid& grid,
                          std::optional<std::pair<double, double>> split = {});

struct SynthesisResult {
  double ka = 0.0;
  std::vector<Matrix> Q;  // certificate at the grid nodes
  double margin = 0.0;
  double max_residual = 0.0;
  GainSchedule gain;
  ShrunkSpec spec;
  TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 2);
  /// Scan points tried, in order, with their optimal margins.
  std::vector<std::pair<double, double>> scan;
};

struct ScanOptions {
  double step = 0.01;
  double ka_max = 10.0;
  int jobs = 1;  // scan points solved concurrently per batch
  SdpOptions sdp;
};

/// Smallest ka in {0, step, 2 step, ...} <= ka_max whose DLMI is feasible.
/// Throws kSynthesisFailed if none is. Infeasible points stop as soon as
/// infeasibility is proven, so their recorded margins are lower bounds.
SynthesisResult scan_gain(const FtsProblem& p, const ShrunkSpec& spec,
                          const TimeGrid& grid, const ScanOptions& options = {});

/// Solves a single scan point; returns the solution without throwing on
/// infeasibility.
SdpSolution solve_dlmi(const FtsProblem& p, const ShrunkSpec& spec, double ka,
                       const TimeGrid& grid, const SdpOptions& options = {});

}  // namespace esfts

#endif  // ESFTS_DLMI_HPP_

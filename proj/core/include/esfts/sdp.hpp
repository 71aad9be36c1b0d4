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

#ifndef ESFTS_SDP_HPP_
#define ESFTS_SDP_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "esfts/core.hpp"

namespace esfts {

/// One affine matrix inequality G(y) = constant + sum_i y_i * coeff_i <= 0.
struct LmiBlock {
  struct Term {
    int var;
    Matrix coeff;  // symmetric
  };

  std::string tag;
  Matrix constant;  // symmetric
  std::vector<Term> terms;

  Eigen::Index dim() const { return constant.rows(); }
  Matrix evaluate(const Vector& y) const;
};

/// Maximize y[margin_var] subject to every block G_j(y) <= 0. Each block
/// must contain the margin variable with coefficient +I, which makes any
/// point strictly feasible once the margin is negative enough.
struct SdpProblem {
  int num_vars = 0;
  int margin_var = 0;
  std::vector<LmiBlock> blocks;
};

struct SdpOptions {
  double gap_tol = 1e-9;     // stop once the duality gap bound is below this
  double strict_tol = 1e-7;  // feasible iff the optimal margin exceeds this
  double t_growth = 10.0;
  int max_newton = 2000;
  /// Stop as soon as the central-path bound proves the optimal margin is
  /// at most strict_tol. The reported margin is then the last iterate.
  bool stop_when_infeasible = false;
};

struct SdpSolution {
  bool feasible = false;
  Vector y;
  double margin = 0.0;
  /// Central-path upper bound on the optimal margin.
  double margin_upper = 0.0;
  /// max_j lambda_max(G_j(y)), re-checked by eigenvalue evaluation.
  double max_residual = 0.0;
  int newton_steps = 0;
};

/// Margin-maximizing solution by a log-barrier interior-point method with
/// sparse Newton systems. `initial` may seed the non-margin variables.
/// Throws kSolver with diagnostics on numerical failure or unboundedness.
SdpSolution solve_feasibility(const SdpProblem& sdp,
                              const SdpOptions& options = {},
                              const Vector* initial = nullptr);

/// Largest eigenvalue over all blocks of G_j(y).
double max_block_residual(const SdpProblem& sdp, const Vector& y);

/// Plain-text dump of the problem, one block at a time:
///
///   esfts-sdp 1
///   vars <num_vars> margin <margin_var> blocks <count>
///   block <index> <tag> dim <d> terms <k>
///   const <d*d row-major values>
///   var <i> <d*d row-major values>      (k lines)
void write_sdp_text(std::ostream& os, const SdpProblem& sdp);

}  // namespace esfts

#endif  // ESFTS_SDP_HPP_

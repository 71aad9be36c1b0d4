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

#include <sstream>

#include <gtest/gtest.h>

#include "esfts/sdp.hpp"

namespace esfts {
namespace {

Matrix s(double v) { return Matrix::Constant(1, 1, v); }

// Variables (q, m): q >= lo and q <= hi, each tightened by m.
SdpProblem interval_problem(double lo, double hi) {
  SdpProblem p;
  p.num_vars = 2;
  p.margin_var = 1;
  p.blocks.push_back({"lower", s(lo), {{0, s(-1.0)}, {1, s(1.0)}}});
  p.blocks.push_back({"upper", s(-hi), {{0, s(1.0)}, {1, s(1.0)}}});
  return p;
}

TEST(Sdp, ScalarIntervalMidpoint) {
  const SdpSolution sol = solve_feasibility(interval_problem(1.0, 3.0));
  EXPECT_TRUE(sol.feasible);
  EXPECT_NEAR(sol.margin, 1.0, 1e-7);
  EXPECT_NEAR(sol.y(0), 2.0, 1e-6);
  EXPECT_LE(sol.max_residual, 1e-7);
  EXPECT_GE(sol.margin_upper, sol.margin);
}

TEST(Sdp, ContradictoryCapsInfeasible) {
  const SdpSolution sol = solve_feasibility(interval_problem(1.0, 0.5));
  EXPECT_FALSE(sol.feasible);
  EXPECT_NEAR(sol.margin, -0.25, 1e-7);
}

TEST(Sdp, EarlyInfeasibilityStopIsConsistent) {
  SdpOptions opts;
  opts.stop_when_infeasible = true;
  const SdpSolution early = solve_feasibility(interval_problem(1.0, 0.5), opts);
  const SdpSolution full = solve_feasibility(interval_problem(1.0, 0.5));
  EXPECT_FALSE(early.feasible);
  EXPECT_LE(early.margin_upper, opts.strict_tol);
  EXPECT_LE(early.margin, full.margin + 1e-9);
  EXPECT_LE(early.newton_steps, full.newton_steps);
}

TEST(Sdp, TwoByTwoEigenvalueMargin) {
  // Q in S^2 with I <= Q <= 3 I plus Q_01 = 0.5 pinned by the margin:
  // optimum Q = 2 I, margin 1.
  SdpProblem p;
  p.num_vars = 4;
  p.margin_var = 3;
  Matrix e00 = Matrix::Zero(2, 2), e01 = Matrix::Zero(2, 2), e11 = Matrix::Zero(2, 2);
  e00(0, 0) = 1.0;
  e01(0, 1) = e01(1, 0) = 1.0;
  e11(1, 1) = 1.0;
  const Matrix I = Matrix::Identity(2, 2);
  p.blocks.push_back({"lower", I, {{0, -e00}, {1, -e01}, {2, -e11}, {3, I}}});
  p.blocks.push_back({"upper", -3.0 * I, {{0, e00}, {1, e01}, {2, e11}, {3, I}}});
  const SdpSolution sol = solve_feasibility(p);
  EXPECT_TRUE(sol.feasible);
  EXPECT_NEAR(sol.margin, 1.0, 1e-7);
  EXPECT_NEAR(sol.y(0), 2.0, 1e-6);
  EXPECT_NEAR(sol.y(1), 0.0, 1e-6);
  EXPECT_NEAR(sol.y(2), 2.0, 1e-6);
}

TEST(Sdp, StructureChecks) {
  SdpProblem p = interval_problem(1.0, 3.0);
  p.blocks[0].terms.pop_back();  // drop the margin term
  EXPECT_THROW(solve_feasibility(p), Error);

  p = interval_problem(1.0, 3.0);
  p.num_vars = 3;  // variable 2 unused
  EXPECT_THROW(solve_feasibility(p), Error);

  p = interval_problem(1.0, 3.0);
  p.blocks[1].terms[0].coeff = Matrix::Identity(2, 2);
  EXPECT_THROW(solve_feasibility(p), Error);
}

TEST(Sdp, UnboundedMarginIsSolverError) {
  SdpProblem p;
  p.num_vars = 2;
  p.margin_var = 1;
  // q + m <= 0 with q free below: margin unbounded.
  p.blocks.push_back({"free", s(0.0), {{0, s(1.0)}, {1, s(1.0)}}});
  try {
    solve_feasibility(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSolver);
  }
}

TEST(Sdp, TextExport) {
  std::ostringstream os;
  write_sdp_text(os, interval_problem(1.0, 3.0));
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("esfts-sdp 1\nvars 2 margin 1 blocks 2\n", 0), 0u);
  EXPECT_NE(text.find("block 0 lower dim 1 terms 2\nconst 1\nvar 0 -1\nvar 1 1\n"),
            std::string::npos);
}

TEST(Sdp, ResidualIsLargestEigenvalue) {
  const SdpProblem p = interval_problem(1.0, 3.0);
  Vector y(2);
  y << 2.0, 0.5;
  EXPECT_DOUBLE_EQ(max_block_residual(p, y), -0.5);
}

}  // namespace
}  // namespace esfts

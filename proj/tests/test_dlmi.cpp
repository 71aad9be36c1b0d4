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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "esfts/averaging.hpp"
#include "esfts/dlmi.hpp"
#include "esfts/geometry.hpp"
#include "esfts/linalg.hpp"
#include "esfts/sim.hpp"
#include "test_support.hpp"

namespace esfts {
namespace {

FtsProblem scalar_problem(double a, double b, double pi, double g, double r) {
  FtsProblem p;
  p.n = 1;
  p.A = MatrixSchedule::constant(Matrix::Constant(1, 1, a));
  p.B = MatrixSchedule::constant(Matrix::Constant(1, 1, b));
  p.R = Matrix::Constant(1, 1, r);
  p.Gamma = MatrixSchedule::constant(Matrix::Constant(1, 1, g));
  p.Pi = MatrixSchedule::constant(Matrix::Constant(1, 1, pi));
  p.t0 = 0.0;
  p.T = 1.0;
  p.Delta = 0.0;
  return p;
}

TEST(DlmiLayout, CountsAndRoundTrip) {
  const DlmiLayout layout(2, 100);
  EXPECT_EQ(layout.per_node(), 3);
  EXPECT_EQ(layout.num_vars(), 304);
  EXPECT_EQ(layout.margin_var(), 303);
  std::mt19937_64 rng(1);
  std::vector<Matrix> q;
  for (int k = 0; k <= 100; ++k) q.push_back(testing::random_spd(rng, 2));
  const Vector y = layout.pack(q, 0.25);
  EXPECT_DOUBLE_EQ(y(303), 0.25);
  const auto back = layout.unpack(y);
  for (int k = 0; k <= 100; ++k) EXPECT_TRUE(back[k].isApprox(q[k], 1e-15));
}

TEST(AssembleLmi, BlockCountsAndTags) {
  const auto c = testing::ex1_narrow_case(100);
  const ShrunkSpec spec = shrunk_gamma(c.problem, c.grid);
  const SdpProblem sdp = assemble_lmi(c.problem, spec, 0.04, c.grid);
  EXPECT_EQ(sdp.num_vars, 304);
  EXPECT_EQ(sdp.blocks.size(), 302u);
  EXPECT_EQ(sdp.blocks.front().tag, "interval-DLMI(0,left)");
  EXPECT_EQ(sdp.blocks[1].tag, "interval-DLMI(0,right)");
  EXPECT_EQ(sdp.blocks[200].tag, "cap(0)");
  EXPECT_EQ(sdp.blocks.back().tag, "initial");
}

TEST(AssembleLmi, ScalarHandExpansion) {
  const double a = 0.3, b = -1.5, pi = 2.0, g = 2.0, r = 3.0, ka = 0.1;
  const FtsProblem p = scalar_problem(a, b, pi, g, r);
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 4);
  const ShrunkSpec spec = shrunk_gamma(validate_problem(p, grid), grid);
  const SdpProblem sdp = assemble_lmi(p, spec, ka, grid);
  const double h = 0.25;
  const double abar = a - ka * b * b * pi;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    Vector y(6);
    for (int i = 0; i < 6; ++i) y(i) = u(rng);
    const double m = y(5);
    for (int k = 0; k < 4; ++k) {
      const double qdot = (y(k + 1) - y(k)) / h;
      EXPECT_NEAR(sdp.blocks[2 * k].evaluate(y)(0, 0), -qdot + 2 * abar * y(k) + m, 1e-12);
      EXPECT_NEAR(sdp.blocks[2 * k + 1].evaluate(y)(0, 0),
                  -qdot + 2 * abar * y(k + 1) + m, 1e-12);
    }
    for (int k = 0; k <= 4; ++k) {
      EXPECT_NEAR(sdp.blocks[8 + k].evaluate(y)(0, 0), y(k) + m - 1.0 / g, 1e-12);
    }
    EXPECT_NEAR(sdp.blocks[13].evaluate(y)(0, 0), 1.0 / r + m - y(0), 1e-12);
  }
}

TEST(AssembleLmi, ZeroGainIsOpenLoopCondition) {
  const auto c = testing::ex1_narrow_case(20);
  const ShrunkSpec spec = shrunk_gamma(c.problem, c.grid);
  const SdpProblem sdp = assemble_lmi(c.problem, spec, 0.0, c.grid);
  const DlmiLayout layout(2, 20);
  std::vector<Matrix> q(21, 0.3 * Matrix::Identity(2, 2));
  q[3](0, 1) = q[3](1, 0) = 0.05;
  const Vector y = layout.pack(q, 0.0);
  const Matrix a = c.problem.a(0.0);
  const Matrix qdot = (q[4] - q[3]) / c.grid.step();
  const Matrix expected = -qdot + a * q[3] + q[3] * a.transpose();
  EXPECT_TRUE(sdp.blocks[6].evaluate(y).isApprox(expected, 1e-12));
}

TEST(ExtractGain, Example1) {
  const auto c = testing::example_case("ex1");
  const GainSchedule g = extract_gain(c.problem, 0.04, c.grid);
  EXPECT_DOUBLE_EQ(g.k, 0.2);
  EXPECT_DOUBLE_EQ(g.alpha, 0.2);
  Matrix expected(1, 2);
  expected << 0.0, -0.08;
  for (double t : {0.0, 3.3, 10.0}) EXPECT_TRUE(g.K.value(t).isApprox(expected, 1e-15));
  const GainSchedule zero = extract_gain(c.problem, 0.0, c.grid);
  EXPECT_EQ(zero.K.value(5.0).norm(), 0.0);
  const GainSchedule split = extract_gain(c.problem, 0.04, c.grid, std::pair{0.1, 0.4});
  EXPECT_DOUBLE_EQ(split.k, 0.1);
  EXPECT_DOUBLE_EQ(split.alpha, 0.4);
}

TEST(ExtractGain, Example2VanishesMidHorizon) {
  const auto c = testing::example_case("ex2");
  const GainSchedule g = extract_gain(c.problem, 0.11, c.grid);
  EXPECT_LE(g.K.value(2.5).norm(), 1e-15);
}

class Example3Synthesis : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto c = testing::example_case("ex3");
    problem_ = new FtsProblem(c.problem);
    grid_ = new TimeGrid(c.grid);
    spec_ = new ShrunkSpec(shrunk_gamma(c.problem, c.grid));
    result_ = new SynthesisResult(scan_gain(c.problem, *spec_, c.grid));
  }
  static void TearDownTestSuite() {
    delete result_;
    delete spec_;
    delete grid_;
    delete problem_;
  }
  static FtsProblem* problem_;
  static TimeGrid* grid_;
  static ShrunkSpec* spec_;
  static SynthesisResult* result_;
};

FtsProblem* Example3Synthesis::problem_ = nullptr;
TimeGrid* Example3Synthesis::grid_ = nullptr;
ShrunkSpec* Example3Synthesis::spec_ = nullptr;
SynthesisResult* Example3Synthesis::result_ = nullptr;

TEST_F(Example3Synthesis, MinimalProduct) {
  EXPECT_NEAR(result_->ka, 0.14, 1e-12);
  EXPECT_GT(result_->margin, 1e-7);
  EXPECT_EQ(result_->scan.size(), 15u);
  for (std::size_t i = 0; i + 1 < result_->scan.size(); ++i) {
    EXPECT_LE(result_->scan[i].second, 1e-7);
  }
}

TEST_F(Example3Synthesis, CertificateRecheck) {
  const SdpProblem sdp = assemble_lmi(*problem_, *spec_, result_->ka, *grid_);
  const DlmiLayout layout(problem_->n, grid_->intervals());
  const Vector y = layout.pack(result_->Q, 0.0);
  for (const auto& block : sdp.blocks) {
    const double top = Eigen::SelfAdjointEigenSolver<Matrix>(block.evaluate(y))
                           .eigenvalues()
                           .maxCoeff();
    EXPECT_LE(top, -(result_->margin - 1e-7)) << block.tag;
  }
}

TEST_F(Example3Synthesis, CertificateProperties) {
  for (std::size_t k = 0; k < result_->Q.size(); ++k) {
    const Matrix& q = result_->Q[k];
    EXPECT_TRUE(linalg::is_positive_definite(q));
    EXPECT_GT(linalg::min_eigenvalue(
                  linalg::sym_inverse(spec_->GammaBar.value(grid_->node(static_cast<int>(k)))) - q),
              0.0);
  }
  EXPECT_GT(linalg::min_eigenvalue(result_->Q[0] - linalg::sym_inverse(problem_->R)), 0.0);
}

TEST_F(Example3Synthesis, ScanNeverExceedsVerifiedFeasibleProduct) {
  for (double ka : {0.15, 0.2, 0.5}) {
    const SdpSolution sol = solve_dlmi(*problem_, *spec_, ka, *grid_);
    if (sol.feasible) EXPECT_LE(result_->ka, ka);
  }
  EXPECT_FALSE(solve_dlmi(*problem_, *spec_, 0.13, *grid_).feasible);
}

TEST_F(Example3Synthesis, ParallelScanAgrees) {
  ScanOptions opts;
  opts.jobs = 4;
  const SynthesisResult par = scan_gain(*problem_, *spec_, *grid_, opts);
  EXPECT_DOUBLE_EQ(par.ka, result_->ka);
  EXPECT_NEAR(par.margin, result_->margin, 1e-9);
}

// Averaged trajectories from the R-ellipsoid boundary stay inside GammaBar.
TEST_F(Example3Synthesis, AveragedSystemIsFts) {
  const Matrix rinv_sqrt = linalg::sym_inverse(problem_->R).llt().matrixL();
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int run = 0; run < 50; ++run) {
    Vector d(2);
    d << g(rng), g(rng);
    d.normalize();
    const Vector x0 = rinv_sqrt * d;
    ASSERT_NEAR(x0.dot(problem_->R * x0), 1.0, 1e-12);
    const Trajectory xbar = simulate_averaged(*problem_, result_->ka, x0, problem_->T / 5000);
    for (std::size_t i = 0; i < xbar.size(); ++i) {
      const Vector x = xbar.state(i);
      ASSERT_LT(x.dot(spec_->GammaBar.value(xbar.times[i]) * x), 1.0);
    }
  }
}

TEST(ScanGain, Example1NarrowTubeStableUnderRefinement) {
  const auto c = testing::ex1_narrow_case(100);
  const auto f = testing::ex1_narrow_case(200);
  const SynthesisResult coarse = scan_gain(c.problem, shrunk_gamma(c.problem, c.grid), c.grid);
  const SynthesisResult fine = scan_gain(f.problem, shrunk_gamma(f.problem, f.grid), f.grid);
  EXPECT_LE(std::abs(coarse.ka - fine.ka), 0.01 + 1e-12);
}

TEST(ScanGain, InfeasibleRangeReportsBestMargin) {
  const auto c = testing::example_case("ex3");
  ScanOptions opts;
  opts.ka_max = 0.05;
  try {
    scan_gain(c.problem, shrunk_gamma(c.problem, c.grid), c.grid, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSynthesisFailed);
    EXPECT_NE(std::string(e.what()).find("best margin"), std::string::npos);
  }
}

TEST(ScanGain, RejectsBadOptions) {
  const auto c = testing::example_case("ex3");
  ScanOptions opts;
  opts.step = 0.0;
  EXPECT_THROW(scan_gain(c.problem, shrunk_gamma(c.problem, c.grid), c.grid, opts), Error);
}

TEST(ScanGain, Example1AsPrintedHasNoCertificateAtReportedProduct) {
  // Shrunk target built directly (it does not fit inside R): Q0 > R^-1 and
  // Q0 < GammaBar^-1 contradict, so no ka can be feasible.
  const auto c = testing::example_case("ex1");
  ShrunkSpec spec;
  const double r = shrink_factor(c.problem.gamma(0.0), c.problem.Delta);
  std::vector<MatrixSchedule::Sample> samples;
  for (int k = 0; k <= c.grid.intervals(); ++k) {
    spec.times.push_back(c.grid.node(k));
    spec.r.push_back(r);
    spec.gamma_min.push_back(gamma_min(c.problem.gamma(0.0)));
    samples.push_back({c.grid.node(k), c.problem.gamma(0.0) / (r * r)});
  }
  spec.GammaBar = MatrixSchedule::sampled(samples);
  EXPECT_FALSE(solve_dlmi(c.problem, spec, 0.04, c.grid).feasible);
}

}  // namespace
}  // namespace esfts

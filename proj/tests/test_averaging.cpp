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
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "esfts/averaging.hpp"
#include "esfts/examples.hpp"
#include "test_support.hpp"

namespace esfts {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const FastInput kCos = [](double, double th) { return std::cos(th); };
const FastInput kSin = [](double, double th) { return std::sin(th); };

TEST(NuCoefficient, TrigonometricPairs) {
  EXPECT_NEAR(nu_coefficient(kCos, kSin, kTwoPi), std::numbers::pi, 1e-9);
  EXPECT_NEAR(nu_coefficient(kCos, kCos, kTwoPi), 0.0, 1e-9);
  EXPECT_NEAR(nu_coefficient(kSin, kCos, kTwoPi), -std::numbers::pi, 1e-9);
}

TEST(NuCoefficient, Antisymmetric) {
  const double a = nu_coefficient(kCos, kSin, kTwoPi);
  const double b = nu_coefficient(kSin, kCos, kTwoPi);
  EXPECT_NEAR(a + b, 0.0, 1e-8);
}

TEST(NuCoefficient, RejectsNonZeroMean) {
  const FastInput biased = [](double, double th) { return 1.0 + std::sin(th); };
  try {
    nu_coefficient(biased, kCos, kTwoPi);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kContract);
  }
}

TEST(LieBracket, ConstantFieldsCommute) {
  const Vector c1 = Vector::Constant(2, 1.5);
  const Vector c2 = Vector::Constant(2, -0.5);
  const Vector x = Vector::Ones(2);
  const Vector br = lie_bracket([&](const Vector&) { return c1; },
                                [&](const Vector&) { return c2; }, x);
  EXPECT_LE(br.norm(), 1e-12);
}

TEST(LieBracket, LinearFieldsGiveCommutator) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Matrix m1(3, 3), m2(3, 3);
    Vector x(3);
    for (int i = 0; i < 9; ++i) {
      m1(i / 3, i % 3) = g(rng);
      m2(i / 3, i % 3) = g(rng);
    }
    for (int i = 0; i < 3; ++i) x(i) = g(rng);
    const Vector br = lie_bracket([&](const Vector& y) { return Vector(m1 * y); },
                                  [&](const Vector& y) { return Vector(m2 * y); }, x);
    const Vector expected = (m2 * m1 - m1 * m2) * x;
    EXPECT_LE((br - expected).norm(), 1e-6 * (1.0 + expected.norm()));
  }
}

TEST(LieBracket, Antisymmetric) {
  const FtsProblem p = builtin_example("ex1").problem;
  const DitheredField d = es_dithered_field(p, 0.3, 0.5, 0.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(2);
    x << u(rng), u(rng);
    const Vector a = lie_bracket(d.fields()[0], d.fields()[1], x);
    const Vector b = lie_bracket(d.fields()[1], d.fields()[0], x);
    EXPECT_LE((a + b).norm(), 1e-5);
  }
}

TEST(LieBracket, EsFieldsGiveGradientTerm) {
  // [alpha B, -k B x'Pi x] = -2 k alpha B B' Pi x
  const FtsProblem p = builtin_example("ex3").problem;
  const double k = 0.4, alpha = 0.7, t = 1.2;
  const DitheredField d = es_dithered_field(p, k, alpha, t);
  Vector x(2);
  x << 0.3, -0.8;
  const Vector b = p.b(t);
  const Vector expected = -2.0 * k * alpha * b * (b.transpose() * p.pi(t) * x);
  const Vector br = lie_bracket(d.fields()[0], d.fields()[1], x);
  EXPECT_LE((br - expected).norm(), 1e-6 * (1.0 + expected.norm()));
}

TEST(AveragedField, SingleFieldIsDrift) {
  const FtsProblem p = builtin_example("ex1").problem;
  const VectorField b = [&](const Vector&) { return p.b(0.0); };
  const DitheredField d({b}, {kCos}, kTwoPi);
  Vector x(2);
  x << 0.4, 0.1;
  EXPECT_EQ(averaged_field(es_drift(p, 0.0), d, x), p.a(0.0) * x);
}

TEST(AveragedField, ZeroAmplitudeInputsGiveDrift) {
  const FtsProblem p = builtin_example("ex1").problem;
  const FastInput zero = [](double, double) { return 0.0; };
  const DitheredField d({[&](const Vector&) { return p.b(0.0); },
                         [&](const Vector& y) { return Vector(p.b(0.0) * y.squaredNorm()); }},
                        {zero, zero}, kTwoPi);
  Vector x(2);
  x << 0.4, 0.1;
  EXPECT_LE((averaged_field(es_drift(p, 0.0), d, x) - p.a(0.0) * x).norm(), 1e-15);
}

TEST(AveragedField, Example1AtUnitState) {
  const FtsProblem p = builtin_example("ex1").problem;
  const double k = 0.2, alpha = 0.2;
  const DitheredField d = es_dithered_field(p, k, alpha, 0.0);
  EXPECT_NEAR(d.nu()(0, 1) / d.period(), 0.5, 1e-9);
  const Vector x = Vector::Unit(2, 0);
  const Vector expected = averaged_matrix(p, k * alpha, 0.0) * x;
  const Vector got = averaged_field(es_drift(p, 0.0), d, x);
  EXPECT_LE((got - expected).norm(), 1e-6 * expected.norm());
}

// Numeric averaging of the ES fields against the closed-form averaged loop.
TEST(AveragedField, OracleEquivalenceAllExamples) {
  for (const auto& name : builtin_example_names()) {
    const auto c = testing::example_case(name);
    const FtsProblem& p = c.problem;
    const double k = 0.35, alpha = 0.4;
    const MatrixSchedule abar = averaged_closed_loop(p, k * alpha, c.grid);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      Vector x(p.n);
      for (int i = 0; i < p.n; ++i) x(i) = u(rng);
      if (x.norm() > 1.0) x /= x.norm();
      const int node = static_cast<int>(ut(rng) * c.grid.intervals());
      const double t = c.grid.node(node);
      const DitheredField d = es_dithered_field(p, k, alpha, t);
      const Vector got = averaged_field(es_drift(p, t), d, x);
      const Vector expected = abar.value(t) * x;
      EXPECT_LE((got - expected).norm(), 1e-6 * std::max(expected.norm(), 1e-12))
          << name << " t = " << t;
    }
  }
}

TEST(AveragedMatrix, Examples) {
  const FtsProblem p1 = builtin_example("ex1").problem;
  EXPECT_EQ(averaged_matrix(p1, 0.0, 3.0), p1.a(3.0));
  Matrix expected(2, 2);
  expected << 0.0, 0.01, -0.1, 0.07;
  EXPECT_TRUE(averaged_matrix(p1, 0.04, 0.0).isApprox(expected, 1e-14));

  const FtsProblem p2 = builtin_example("ex2").problem;
  EXPECT_LE((averaged_matrix(p2, 0.11, 2.5) - p2.a(2.5)).norm(), 1e-15);
}

TEST(AveragedClosedLoop, SampledOnGrid) {
  const auto c = testing::example_case("ex3");
  const MatrixSchedule s = averaged_closed_loop(c.problem, 0.14, c.grid);
  ASSERT_EQ(s.kind(), MatrixSchedule::Kind::kSampledLinear);
  ASSERT_EQ(s.samples().size(), static_cast<std::size_t>(c.grid.intervals() + 1));
  for (int k : {0, 17, 300}) {
    EXPECT_EQ(s.value(c.grid.node(k)), averaged_matrix(c.problem, 0.14, c.grid.node(k)));
  }
}

}  // namespace
}  // namespace esfts

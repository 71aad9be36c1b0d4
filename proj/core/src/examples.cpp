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

#include "esfts/examples.hpp"

namespace esfts {

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix col2(double a, double b) {
  Matrix m(2, 1);
  m << a, b;
  return m;
}

FtsProblem example1_problem() {
  FtsProblem p;
  p.n = 2;
  p.A = MatrixSchedule::constant(mat2(0.0, 0.01, -0.1, 0.15));
  p.B = MatrixSchedule::constant(col2(0.0, 1.0));
  p.R = Matrix::Identity(2, 2) / 0.4;
  p.Gamma = MatrixSchedule::constant(Matrix::Identity(2, 2) / 0.5);
  p.Pi = p.Gamma;
  p.t0 = 0.0;
  p.T = 10.0;
  p.Delta = 0.09;
  return p;
}

}  // namespace

BuiltinExample builtin_example(std::string_view name) {
  BuiltinExample ex;
  ex.name = std::string(name);
  if (name == "ex1") {
    ex.problem = example1_problem();
    ex.grid_intervals = 100;  // Ts = 0.1 s
    ex.reported_ka = 0.04;
    ex.reported_omega_2nd = 750.0;
    ex.reported_omega_1st = 739.0;
    return ex;
  }
  if (name == "ex2") {
    ex.problem = example1_problem();
    ex.problem.B = MatrixSchedule::profile(col2(0.0, 1.0),
                                           ScalarProfile::cosine(10.0));
    ex.grid_intervals = 1000;  // Ts = 0.01 s
    ex.reported_ka = 0.11;
    ex.reported_omega_2nd = 1931.0;
    ex.reported_omega_1st = 1902.0;
    return ex;
  }
  if (name == "ex3") {
    FtsProblem& p = ex.problem;
    p.n = 2;
    p.A = MatrixSchedule::profile(mat2(0.5, -0.1, 0.0, -0.15),
                                  ScalarProfile::affine(1.0, 0.1));
    p.B = MatrixSchedule::constant(col2(1.0, 0.0));
    p.R = mat2(6.25, 0.0, 0.0, 9.375);
    p.Gamma = MatrixSchedule::profile(mat2(4.0, 0.0, 0.0, 6.0),
                                      ScalarProfile::exp_rate(0.1));
    p.Pi = p.Gamma;
    p.t0 = 0.0;
    p.T = 5.0;
    p.Delta = 0.0735;
    ex.grid_intervals = 300;
    ex.reported_ka = 0.14;
    ex.reported_omega_2nd = 1714.0;
    ex.reported_omega_1st = 1656.0;
    return ex;
  }
  throw Error(ErrorKind::kConfig,
              "unknown builtin example '" + std::string(name) +
                  "' (expected ex1, ex2 or ex3)");
}

std::vector<std::string> builtin_example_names() { return {"ex1", "ex2", "ex3"}; }

}  // namespace esfts

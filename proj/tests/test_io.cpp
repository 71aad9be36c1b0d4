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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "esfts/examples.hpp"
#include "esfts/io.hpp"
#include "esfts/sim.hpp"

namespace esfts {
namespace {

namespace fs = std::filesystem;
using io::json;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("esfts_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(ProblemJson, RoundTripExamples) {
  for (const auto& name : builtin_example_names()) {
    const FtsProblem p = builtin_example(name).problem;
    const FtsProblem q = io::problem_from_json(json::parse(io::problem_to_json(p).dump()));
    EXPECT_EQ(q.n, p.n);
    EXPECT_EQ(q.R, p.R);
    EXPECT_EQ(q.T, p.T);
    EXPECT_EQ(q.Delta, p.Delta);
    for (double t : {0.0, 1.7, p.T}) {
      EXPECT_EQ(q.a(t), p.a(t)) << name;
      EXPECT_EQ(q.b(t), p.b(t)) << name;
      EXPECT_EQ(q.gamma(t), p.gamma(t)) << name;
      EXPECT_EQ(q.pi(t), p.pi(t)) << name;
    }
    EXPECT_EQ(io::problem_to_json(q), io::problem_to_json(p));
  }
}

TEST(ProblemJson, BareArraysAndDefaultPi) {
  const json j = json::parse(R"({
    "n": 2, "A": [[0, 1], [-1, 0]], "B": [[0], [1]], "R": [[3, 0], [0, 3]],
    "Gamma": {"kind": "sampled_linear",
              "samples": [{"t": 0, "value": [[1, 0], [0, 1]]},
                          {"t": 2, "value": [[2, 0], [0, 2]]}]},
    "t0": 0, "T": 2, "Delta": 0.1})");
  const FtsProblem p = io::problem_from_json(j);
  EXPECT_EQ(p.A.kind(), MatrixSchedule::Kind::kConstant);
  EXPECT_TRUE(p.pi(1.0).isApprox(1.5 * Matrix::Identity(2, 2)));
}

TEST(ProblemJson, ScalarProfileSchedule) {
  const json j = json::parse(R"({"kind": "scalar_profile", "base": [[4, 0], [0, 6]],
                                 "profile": {"name": "exp_rate", "params": [0.1]}})");
  const MatrixSchedule s = io::schedule_from_json(j, "Gamma");
  EXPECT_NEAR(s.value(1.0)(1, 1), 6.0 * std::exp(0.1), 1e-14);
}

TEST(ProblemJson, Errors) {
  auto kind_of = [](const std::string& text) {
    try {
      io::problem_from_json(json::parse(text));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kSolver;  // sentinel: no error
  };
  const std::string base = R"("A": [[0]], "B": [[1]], "R": [[2]], "Gamma": [[1]], "t0": 0, "T": 1, "Delta": 0.1)";
  EXPECT_EQ(kind_of("{" + base + "}"), ErrorKind::kConfig);  // missing n
  EXPECT_EQ(kind_of(R"({"n": 1, "A": {"kind": "spline"}, "B": [[1]], "R": [[2]], "Gamma": [[1]], "t0": 0, "T": 1, "Delta": 0.1})"),
            ErrorKind::kConfig);
  EXPECT_EQ(kind_of(R"({"n": 1, "A": [[0, 1], [1]], "B": [[1]], "R": [[2]], "Gamma": [[1]], "t0": 0, "T": 1, "Delta": 0.1})"),
            ErrorKind::kDimension);
  EXPECT_EQ(kind_of(R"({"n": 1, "A": [["x"]], "B": [[1]], "R": [[2]], "Gamma": [[1]], "t0": 0, "T": 1, "Delta": 0.1})"),
            ErrorKind::kConfig);
  EXPECT_EQ(kind_of(R"({"n": 1, "A": {"kind": "scalar_profile", "base": [[1]], "profile": {"name": "wobble"}}, "B": [[1]], "R": [[2]], "Gamma": [[1]], "t0": 0, "T": 1, "Delta": 0.1})"),
            ErrorKind::kConfig);
  EXPECT_EQ(kind_of(R"({"n": 1, )" + base + "}"), ErrorKind::kSolver);
}

TEST(LoadProblem, MissingAndMalformedFiles) {
  const fs::path dir = scratch_dir("load");
  try {
    io::load_problem(dir / "missing.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
  std::ofstream(dir / "bad.json") << "{ not json";
  try {
    io::load_problem(dir / "bad.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
  io::write_json(dir / "ex3.json", io::problem_to_json(builtin_example("ex3").problem));
  EXPECT_EQ(io::load_problem(dir / "ex3.json").n, 2);
}

TEST(TrajectoryCsv, HeaderAndQuadraticColumn) {
  const FtsProblem p = builtin_example("ex1").problem;
  Vector x0(2);
  x0 << 0.25, 0.25;
  const Trajectory x = simulate_open_loop(p, x0, 0.5);
  const fs::path dir = scratch_dir("csv");
  io::write_trajectory_csv(dir / "traj.csv", x, p.Gamma, "v");
  const auto l = lines(dir / "traj.csv");
  ASSERT_EQ(l.size(), x.size() + 1);
  EXPECT_EQ(l[0], "t,x1,x2,v");
  EXPECT_EQ(l[1], "0,0.25,0.25,0.25");
}

TEST(EllipseCsv, PointsLieOnBoundaries) {
  const fs::path dir = scratch_dir("ellipse");
  Matrix g(2, 2);
  g << 3.0, 0.5, 0.5, 1.0;
  io::write_ellipse_csv(dir / "plot.csv", {{"Gamma", g}, {"R", 2.0 * Matrix::Identity(2, 2)}}, 91);
  const auto l = lines(dir / "plot.csv");
  ASSERT_EQ(l.size(), 1u + 2 * 91);
  EXPECT_EQ(l[0], "curve,theta,x1,x2");
  for (std::size_t i = 1; i < l.size(); ++i) {
    std::stringstream ss(l[i]);
    std::string name, field;
    std::getline(ss, name, ',');
    double v[3];
    for (double& d : v) {
      std::getline(ss, field, ',');
      d = std::stod(field);
    }
    const Matrix& m = name == "Gamma" ? g : Matrix(2.0 * Matrix::Identity(2, 2));
    Vector x(2);
    x << v[1], v[2];
    EXPECT_NEAR(x.dot(m * x), 1.0, 1e-9);
  }
}

TEST(Reports, VerificationJsonHasSummaryFields) {
  const FtsProblem p = builtin_example("ex3").problem;
  VerifyOptions o;
  o.forced_x0 = Vector::Zero(2);
  const VerificationReport r = monte_carlo_verify(p, {0.3, 0.3, 300.0, 0.0}, 0.09, 2, 3, o);
  const json j = io::verification_to_json(r);
  for (const char* key : {"runs", "passes", "worst_max_dist", "worst_max_v", "sign_flip", "seed"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["runs"], 2);
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["sign_flip"]["runs"], 2);
}

}  // namespace
}  // namespace esfts

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

#include "esfts/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace esfts::io {

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorKind::kConfig, msg);
}

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    config_error(std::string("field '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    config_error(std::string(what) + " must be a non-empty nested array");
  }
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.empty()) {
      config_error(std::string(what) + " rows must be non-empty arrays");
    }
    if (r == 0) cols = row.size();
    if (row.size() != cols) {
      throw Error(ErrorKind::kDimension, std::string(what) + " is ragged");
    }
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const json& v = j[r][c];
      if (!v.is_number()) {
        config_error(std::string(what) + " entries must be numbers");
      }
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          v.get<double>();
    }
  }
  return m;
}

json schedule_to_json(const MatrixSchedule& s) {
  json j;
  switch (s.kind()) {
    case MatrixSchedule::Kind::kConstant:
      j["kind"] = "constant";
      j["value"] = matrix_to_json(s.base());
      break;
    case MatrixSchedule::Kind::kSampledLinear: {
      j["kind"] = "sampled_linear";
      json samples = json::array();
      for (const auto& smp : s.samples()) {
        samples.push_back({{"t", smp.t}, {"value", matrix_to_json(smp.value)}});
      }
      j["samples"] = std::move(samples);
      break;
    }
    case MatrixSchedule::Kind::kScalarProfile:
      j["kind"] = "scalar_profile";
      j["base"] = matrix_to_json(s.base());
      j["profile"] = {{"name", s.scalar_profile()->name()},
                      {"params", s.scalar_profile()->params()}};
      break;
  }
  return j;
}

MatrixSchedule schedule_from_json(const json& j, const char* what) {
  if (j.is_array()) return MatrixSchedule::constant(matrix_from_json(j, what));
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    config_error(std::string(what) + " must be a tagged schedule object");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    if (!j.contains("value")) config_error(std::string(what) + ": missing 'value'");
    return MatrixSchedule::constant(matrix_from_json(j.at("value"), what));
  }
  if (kind == "sampled_linear") {
    if (!j.contains("samples") || !j.at("samples").is_array()) {
      config_error(std::string(what) + ": missing 'samples' array");
    }
    std::vector<MatrixSchedule::Sample> samples;
    for (const json& smp : j.at("samples")) {
      if (!smp.is_object() || !smp.contains("value")) {
        config_error(std::string(what) + ": samples need 't' and 'value'");
      }
      samples.push_back({number(smp, "t"), matrix_from_json(smp.at("value"), what)});
    }
    return MatrixSchedule::sampled(std::move(samples));
  }
  if (kind == "scalar_profile") {
    if (!j.contains("base") || !j.contains("profile")) {
      config_error(std::string(what) + ": needs 'base' and 'profile'");
    }
    const json& prof = j.at("profile");
    if (!prof.is_object() || !prof.contains("name") || !prof.at("name").is_string()) {
      config_error(std::string(what) + ": profile needs a 'name'");
    }
    std::vector<double> params;
    if (prof.contains("params")) {
      if (!prof.at("params").is_array()) {
        config_error(std::string(what) + ": profile 'params' must be an array");
      }
      for (const json& v : prof.at("params")) {
        if (!v.is_number()) config_error(std::string(what) + ": bad profile parameter");
        params.push_back(v.get<double>());
      }
    }
    return MatrixSchedule::profile(
        matrix_from_json(j.at("base"), what),
        ScalarProfile::from_name(prof.at("name").get<std::string>(), params));
  }
  config_error(std::string(what) + ": unknown schedule kind '" + kind + "'");
}

json problem_to_json(const FtsProblem& p) {
  return {{"n", p.n},
          {"A", schedule_to_json(p.A)},
          {"B", schedule_to_json(p.B)},
          {"R", matrix_to_json(p.R)},
          {"Gamma", schedule_to_json(p.Gamma)},
          {"Pi", schedule_to_json(p.Pi)},
          {"t0", p.t0},
          {"T", p.T},
          {"Delta", p.Delta}};
}

FtsProblem problem_from_json(const json& j) {
  if (!j.is_object()) config_error("problem must be a JSON object");
  for (const char* key : {"n", "A", "B", "R", "Gamma", "t0", "T", "Delta"}) {
    if (!j.contains(key)) config_error(std::string("problem is missing '") + key + "'");
  }
  FtsProblem p;
  if (!j.at("n").is_number_integer()) config_error("'n' must be an integer");
  p.n = j.at("n").get<int>();
  p.A = schedule_from_json(j.at("A"), "A");
  p.B = schedule_from_json(j.at("B"), "B");
  p.R = matrix_from_json(j.at("R"), "R");
  p.Gamma = schedule_from_json(j.at("Gamma"), "Gamma");
  p.Pi = j.contains("Pi") && !j.at("Pi").is_null()
             ? schedule_from_json(j.at("Pi"), "Pi")
             : p.Gamma;
  p.t0 = number(j, "t0");
  p.T = number(j, "T");
  p.Delta = number(j, "Delta");
  return p;
}

FtsProblem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open problem file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kIo,
                "cannot parse problem file '" + path.string() + "': " + e.what());
  }
  return problem_from_json(j);
}

json synthesis_to_json(const SynthesisResult& r) {
  json q = json::array();
  for (const auto& m : r.Q) q.push_back(matrix_to_json(m));
  json scan = json::array();
  for (const auto& [ka, margin] : r.scan) scan.push_back({{"ka", ka}, {"margin", margin}});
  return {{"ka", r.ka},
          {"k", r.gain.k},
          {"alpha", r.gain.alpha},
          {"margin", r.margin},
          {"max_residual", r.max_residual},
          {"grid", {{"t0", r.grid.t0()}, {"T", r.grid.horizon()}, {"N", r.grid.intervals()}}},
          {"Q", std::move(q)},
          {"K", schedule_to_json(r.gain.K)},
          {"r", r.spec.r},
          {"GammaBar", schedule_to_json(r.spec.GammaBar)},
          {"scan", std::move(scan)}};
}

json bound_to_json(const BoundReport& b) {
  return {{"ka", b.ka},
          {"k", b.k},
          {"alpha", b.alpha},
          {"kappa", b.bound.kappa},
          {"eta", b.bound.eta},
          {"eta_exp_integral", b.eta_exp_integral},
          {"b_norm", b.bound.b_norm},
          {"omega_2nd", b.bound.omega_2nd},
          {"omega_1st", b.bound.omega_1st},
          {"regime_scale", b.regime_scale},
          {"regime_ok", b.regime_ok},
          {"warnings", b.warnings}};
}

json metrics_to_json(const RunMetrics& m) {
  return {{"max_dist", m.max_dist},
          {"max_v", m.max_v},
          {"max_v_avg", m.max_v_avg},
          {"fts_ok", m.fts_ok},
          {"dist_ok", m.dist_ok}};
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json suite_to_json(const SuiteSummary& s) {
  json runs = json::array();
  for (const auto& rec : s.records) {
    json r = {{"index", rec.index},
              {"x0", std::vector<double>(rec.x0.data(), rec.x0.data() + rec.x0.size())},
              {"passed", rec.passed()},
              {"diverged", rec.diverged}};
    if (rec.diverged) {
      r["failure"] = rec.failure;
    } else {
      r["metrics"] = metrics_to_json(rec.metrics);
    }
    runs.push_back(std::move(r));
  }
  return {{"runs", s.runs},
          {"passes", s.passes},
          {"fts_passes", s.fts_passes},
          {"dist_passes", s.dist_passes},
          {"worst_max_dist", finite_or_null(s.worst_max_dist)},
          {"worst_max_v", finite_or_null(s.worst_max_v)},
          {"worst_run", s.worst_run},
          {"records", std::move(runs)}};
}

}  // namespace

json verification_to_json(const VerificationReport& v) {
  json j = suite_to_json(v.nominal);
  j["seed"] = v.seed;
  j["ka"] = v.ka;
  j["controller"] = {{"k", v.controller.k},
                     {"alpha", v.controller.alpha},
                     {"omega", v.controller.omega},
                     {"phase", v.controller.phase}};
  j["sign_flip"] = suite_to_json(v.sign_flip);
  j["passed"] = v.passed();
  return j;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& traj, const MatrixSchedule& weight,
                          const std::string& value_name) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << std::setprecision(12) << "t";
  for (Eigen::Index i = 0; i < traj.states.rows(); ++i) out << ",x" << i + 1;
  out << ',' << value_name << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vector x = traj.state(k);
    out << traj.times[k];
    for (Eigen::Index i = 0; i < x.size(); ++i) out << ',' << x(i);
    out << ',' << x.dot(weight.value(traj.times[k]) * x) << '\n';
  }
  if (!out) throw Error(ErrorKind::kIo, "failed writing '" + path.string() + "'");
}

void write_ellipse_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, Matrix>>& curves,
                       int points) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << std::setprecision(12) << "curve,theta,x1,x2\n";
  for (const auto& [name, m] : curves) {
    if (m.rows() < 2) continue;
    const Matrix sec = m.topLeftCorner(2, 2);
    for (int i = 0; i < points; ++i) {
      const double th = 2.0 * std::numbers::pi * i / (points - 1);
      Eigen::Vector2d d(std::cos(th), std::sin(th));
      const double s = 1.0 / std::sqrt(d.dot(sec * d));
      out << name << ',' << th << ',' << s * d(0) << ',' << s * d(1) << '\n';
    }
  }
  if (!out) throw Error(ErrorKind::kIo, "failed writing '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::kIo, "failed writing '" + path.string() + "'");
}

}  // namespace esfts::io

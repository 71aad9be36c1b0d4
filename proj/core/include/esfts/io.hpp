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

#ifndef ESFTS_IO_HPP_
#define ESFTS_IO_HPP_

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "esfts/core.hpp"
#include "esfts/dlmi.hpp"
#include "esfts/frequency.hpp"
#include "esfts/sim.hpp"

namespace esfts::io {

using nlohmann::json;

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const char* what);

/// Tagged schedule objects:
///   {"kind": "constant", "value": [[...]]}
///   {"kind": "sampled_linear", "samples": [{"t": 0, "value": [[...]]}, ...]}
///   {"kind": "scalar_profile", "base": [[...]],
///    "profile": {"name": "exp_rate", "params": [0.1]}}
/// A bare nested array is read as a constant schedule.
json schedule_to_json(const MatrixSchedule& s);
MatrixSchedule schedule_from_json(const json& j, const char* what);

/// {n, A, B, R, Gamma, Pi, t0, T, Delta}; a missing Pi means Pi = Gamma.
json problem_to_json(const FtsProblem& p);
FtsProblem problem_from_json(const json& j);
FtsProblem load_problem(const std::filesystem::path& path);

json synthesis_to_json(const SynthesisResult& r);
json bound_to_json(const BoundReport& b);
json verification_to_json(const VerificationReport& v);
json metrics_to_json(const RunMetrics& m);

/// Header t,x1..xn,<value_name>; the last column is x^T W(t) x.
void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& traj, const MatrixSchedule& weight,
                          const std::string& value_name);

/// Boundary points of the 2-D section {x : x^T M x = 1} in the (x1, x2)
/// plane for each named matrix; columns curve,theta,x1,x2.
void write_ellipse_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, Matrix>>& curves,
                       int points = 361);

void write_json(const std::filesystem::path& path, const json& j);

}  // namespace esfts::io

#endif  // ESFTS_IO_HPP_

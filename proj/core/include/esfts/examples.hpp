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

#ifndef ESFTS_EXAMPLES_HPP_
#define ESFTS_EXAMPLES_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "esfts/core.hpp"

namespace esfts {

/// Problem data of the three reference examples, with the grid resolution
/// and published results they come with.
struct BuiltinExample {
  std::string name;
  FtsProblem problem;
  int grid_intervals = 0;
  double reported_ka = 0.0;
  double reported_omega_2nd = 0.0;
  double reported_omega_1st = 0.0;
};

/// "ex1": LTI plant, constant Gamma.
/// "ex2": ex1 with B(t) = [0, cos(2 pi t / T)]^T.
/// "ex3": LTV plant (1 + t/10) A0, Gamma(t) = Gamma0 exp(t/10).
BuiltinExample builtin_example(std::string_view name);

std::vector<std::string> builtin_example_names();

}  // namespace esfts

#endif  // ESFTS_EXAMPLES_HPP_

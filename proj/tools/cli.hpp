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

#ifndef ESFTS_TOOLS_CLI_HPP_
#define ESFTS_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace esfts::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitInfeasible = 3,
  kExitVerification = 4,
  kExitIo = 5,
};

/// Runs the command line `args` (without the program name). Human readable
/// progress goes to `out`, one-line failure causes to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace esfts::cli

#endif  // ESFTS_TOOLS_CLI_HPP_

// Copyright 2026 The dsest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DSEST_TOOLS_CLI_H_
#define DSEST_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace dsest {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitValidation = 4;

// Runs the command line `args` (without the program name). Results go to
// `out` unless --output is given; diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace dsest

#endif  // DSEST_TOOLS_CLI_H_

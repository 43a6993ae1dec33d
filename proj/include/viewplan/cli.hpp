// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command line front end. Subcommands: generate, simulate, oracle, compare,
// check. Exit codes: 0 success, 2 invalid input or arguments, 3 resource
// guard tripped (state or outcome space too large), 4 infeasible threshold.

#ifndef VIEWPLAN_CLI_HPP_
#define VIEWPLAN_CLI_HPP_

#include <iosfwd>

namespace viewplan {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitResourceLimit = 3;
inline constexpr int kExitInfeasible = 4;

// Parses argv and dispatches; writes human output to `out` and diagnostics
// to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace viewplan

#endif  // VIEWPLAN_CLI_HPP_

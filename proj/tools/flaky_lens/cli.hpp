// Copyright 2026 The Flaky Lens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The flaky_lens command line: parse, smells, preprocess, tokenize,
// features, train, evaluate, report and convert.

#ifndef FLAKYLENS_TOOLS_CLI_HPP_
#define FLAKYLENS_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace flakylens::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// `args` excludes the program name. Returns the process exit code: 0 on
// success, 1 on usage or validation errors, 2 on runtime errors.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace flakylens::cli

#endif  // FLAKYLENS_TOOLS_CLI_HPP_

// Copyright 2026 The docsimp Authors.
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

#ifndef DOCSIMP_TOOLS_CLI_H_
#define DOCSIMP_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace docsimp {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;  // input failed validation
inline constexpr int kExitIo = 2;       // I/O, network or usage error

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace docsimp

int run_cli(int argc, char** argv);

#endif  // DOCSIMP_TOOLS_CLI_H_

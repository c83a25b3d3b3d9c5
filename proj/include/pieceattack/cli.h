// Copyright 2026 The pieceattack Authors.
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

#ifndef PIECEATTACK_CLI_H_
#define PIECEATTACK_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace pieceattack::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

// Entry point behind the pieceattack binary. args excludes the program
// name. Subcommands:
//   tokenizer train|encode|stats
//   victim train|score
//   attack run
//   eval run|sweep
// "--config FILE" supplies key=value defaults; explicit flags win.
int Run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace pieceattack::cli

#endif  // PIECEATTACK_CLI_H_

// Copyright 2026 The pbv Authors
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

#ifndef PBV_CLI_HPP
#define PBV_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace pbv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitCapacityError = 3;

/// Runs one CLI invocation. `args` excludes the program name. Results go to `out`
/// (or to --out), diagnostics and the chosen seed to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace pbv::cli

#endif

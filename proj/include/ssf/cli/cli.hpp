/* Copyright 2026 The SSF Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SSF_CLI_CLI_HPP_
#define SSF_CLI_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace ssf::cli {

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

// Prefix of the environment variables that mirror flags, e.g. SSF_SEED for
// --seed and SSF_WEIGHT_DECAY for --weight-decay.
inline constexpr const char* kEnvPrefix = "SSF_";

// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssf::cli

#endif  // SSF_CLI_CLI_HPP_

// Copyright 2026 The eprbec Authors
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

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace eprsim {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUserError = 2,
    kIoError = 3,
    kInternalError = 4,
};

/// Environment variable naming the default configuration file.
inline constexpr const char *kConfigEnv = "EPRSIM_CONFIG";

/// Runs the command line `args` (without the program name). Results go to
/// `out` unless an output path is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace eprsim

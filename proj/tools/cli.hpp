// Copyright 2026 The rmkit Authors
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

#include <iosfwd>
#include <string>
#include <vector>

namespace rmkit::cli {

enum ExitCode : int {
    kSuccess = 0,
    kArgumentError = 1,
    kIoError = 2,
    kCorruptInput = 3,
    kSemanticMismatch = 4,
};

/// Runs one command line (without the program name) and returns its exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace rmkit::cli

// Copyright 2026 The Shorjit Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shorjit {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitSuccess = 0,
    kExitFactoringFailed = 1,
    kExitUsage = 2,
};

/// Entry point of the shorjit tool. args excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Parses "8,16,32", "4..16" or a mix such as "4..6,16". Throws
/// InvalidArgument on malformed input or an empty range.
std::vector<unsigned> parse_bit_widths(const std::string &text);

}  // namespace shorjit

// Copyright 2026 The qbnet Authors
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

#ifndef QBNET_TOOLS_CLI_H
#define QBNET_TOOLS_CLI_H

#include <ostream>
#include <string>
#include <vector>

namespace qbnet::cli {

/// Runs one command line (without the program name). Returns the process
/// exit code: 0 on success, 2 for malformed input, 3 for numeric failures,
/// 1 for anything else.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qbnet::cli

#endif

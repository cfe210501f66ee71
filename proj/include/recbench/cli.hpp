// Copyright 2026 The recbench Authors. All Rights Reserved.
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

namespace recbench::cli {

/// Process exit codes.
enum class ExitStatus : int {
  kSuccess = 0,
  kConfigError = 1,
  kRuntimeError = 2,
  kSlaNoneQualified = 3,
};

/// Entry point behind the `recbench` binary. `args` excludes argv[0].
/// Diagnostics go to `err`, per-point summaries to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace recbench::cli

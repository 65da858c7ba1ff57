// Copyright 2026 The upsum Authors
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

namespace upsum::cli {

/// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1; // a check ran and failed
constexpr int kExitUsage = 2;   // bad arguments or a runtime error

/// Report schema tag written as "version" in every structured report.
constexpr const char *kReportVersion = "upsum-report/1";

/**
 * Runs one invocation. `args` excludes the program name. Reports go to
 * `out`, diagnostics to `err`.
 */
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace upsum::cli

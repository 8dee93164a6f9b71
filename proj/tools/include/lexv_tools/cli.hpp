/*
 * Copyright 2026 The lexv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lexv::tools {

/// Runs the `lexv` command line. `args` excludes the program name. Failures
/// print {"error": {"kind": ..., "message": ...}} to `err` and return nonzero:
/// 2 for usage errors, 1 otherwise.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Appends `--key value` for every config entry whose flag is not already in
/// `args`. Booleans become bare flags, arrays comma-joined lists.
std::vector<std::string> merge_config(const std::vector<std::string>& args, const std::string& config_json);

}  // namespace lexv::tools

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

#include <filesystem>
#include <string>

#include "lexv/data.hpp"
#include "lexv/gpc.hpp"
#include "lexv/kernels.hpp"
#include "lexv/mimic.hpp"

namespace lexv {

// JSON documents. Numbers are written so that they read back bit-identical.

/// {"kind": ..., "w": ..., "alpha": ..., "length": ...}
std::string kernel_to_json(const KernelSpec& kernel);
KernelSpec kernel_from_json(const std::string& text);

/// Kernel, training inputs and labels, site variances, alpha and EP status.
/// Loading refactorizes and verifies K + Sigma.
std::string gpc_to_json(const GpcModel& model);
GpcModel gpc_from_json(const std::string& text);

/// Reference points, their labels and the window width.
std::string mimic_to_json(const ParzenMimic& mimic);
ParzenMimic mimic_from_json(const std::string& text);

/// {feature: {"mean": ..., "std": ...}} in feature order.
std::string norm_to_json(const NormStats& stats);
NormStats norm_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace lexv

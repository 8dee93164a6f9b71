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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lexv/types.hpp"

namespace lexv {

struct ExplanationTable {
  std::vector<std::string> feature_names;
  std::vector<std::size_t> ids;
  std::vector<ExplanationVector> rows;
};

/// CSV with header `id,<f...>,grad_<f>...,label,probability,source,far_field`.
/// Ids default to 0..n-1 when `ids` is empty.
void write_explanations(std::ostream& out, std::span<const ExplanationVector> explanations,
                        std::span<const std::string> feature_names, std::span<const std::size_t> ids = {});
void save_explanations(const std::filesystem::path& path, std::span<const ExplanationVector> explanations,
                       std::span<const std::string> feature_names, std::span<const std::size_t> ids = {});

ExplanationTable read_explanations(std::istream& in, const std::string& source = "<stream>");
ExplanationTable load_explanations(const std::filesystem::path& path);

}  // namespace lexv

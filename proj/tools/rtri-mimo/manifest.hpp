// SPDX-License-Identifier: Apache-2.0
//
// rtri-mimo: training-based MIMO links with residual transmit RF impairments
// Copyright (C) 2026 The rtri-mimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "options.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace cli {

struct OutputFile {
    std::string file; ///< name relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::string& path);

std::string manifest_name(const std::string& command);

/// Manifest document: parameters, seed, trials, versions, wall clock, output digests, notes.
nlohmann::json make_manifest(const RunOptions& opt, const std::vector<OutputFile>& outputs, double wall_seconds,
                             const nlohmann::json& notes);

} // namespace cli

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
#include "table.hpp"

#include "rtri/rtri.h"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <vector>

namespace cli {

/// Failure reported by the rtri C library.
class LibraryError : public std::runtime_error {
public:
    LibraryError(rtri_status status, const std::string& what) : std::runtime_error(what), status_(status) {}
    rtri_status status() const noexcept { return status_; }

private:
    rtri_status status_;
};

/// Computes the tables of one subcommand. Skipped combinations and summary
/// statistics are appended to `notes`.
std::vector<Table> run_command(const RunOptions& opt, nlohmann::json& notes);

} // namespace cli
